#include "fixtures.hpp"

#include <algorithm>

#include "grad/io.hpp"

namespace grad::testing {

MovieLens movielens()
{
    MovieLens m;
    auto& g = m.g;
    m.v1 = g.add_entity_node("MOVIE", {{"IMDB_ID", 3884}, {"RT_ID", "Star_Trek"}});
    m.v2 = g.add_entity_node("CITY", {{"CityName", "UTAH"}});
    m.v3 = g.add_entity_node("COUNTRY", {{"CountryName", "USA"}});
    m.v4 = g.add_entity_node("DIRECTOR", {{"DirectorName", "J.J._Abrams"}});
    m.v5 = g.add_entity_node("ACTOR", {{"ActorName", "Eric_Bana"}});
    m.v6 = g.add_entity_node("ACTOR", {{"ActorName", "Chris_Pine"}});
    m.e12 = g.add_entity_edge(m.v1, m.v2, EntityEdgeKind::Association, "FILMED IN");
    m.e14 = g.add_entity_edge(m.v1, m.v4, EntityEdgeKind::Association, "DIRECTS");
    m.e15 = g.add_entity_edge(m.v1, m.v5, EntityEdgeKind::Association, "ACTS", {{"ranking", 1}});
    m.e16 = g.add_entity_edge(m.v1, m.v6, EntityEdgeKind::Association, "ACTS");
    m.e23 = g.add_entity_edge(m.v2, m.v3, EntityEdgeKind::Composition, "LOCATED IN");
    m.rating = g.add_attribute(m.v1, "Rating");
    m.e1r = g.attribute(m.rating).edge;
    m.audience = g.add_literal(m.rating, 8.5, {{"Type", "Audience"}});
    m.erv = g.literal(m.audience).edge;
    return m;
}

GradGraph two_movies()
{
    auto m = movielens();
    const NodeId sequel = m.g.add_entity_node("MOVIE", {{"IMDB_ID", 1408706}, {"RT_ID", "Star_Trek_Into_Darkness"}});
    m.g.add_entity_edge(sequel, m.v5, EntityEdgeKind::Association, "ACTS", {{"ranking", 2}});
    m.g.add_entity_edge(sequel, m.v6, EntityEdgeKind::Association, "ACTS", {{"ranking", 1}});
    return std::move(m.g);
}

AtomicPredicate label_is(const std::string& label)
{
    return {PredicateTarget::NodeLabel, {}, CompareOp::Equal, Value(label)};
}

AtomicPredicate edge_label_is(const std::string& label)
{
    return {PredicateTarget::EdgeLabel, {}, CompareOp::Equal, Value(label)};
}

GraphPattern movie_assertion_pattern()
{
    GraphPattern p;
    p.nodes = {
        {"m", PatternNodeKind::Entity, {label_is("MOVIE")}},
        {"a", PatternNodeKind::Entity, {label_is("ACTOR")}},
        {"d", PatternNodeKind::Entity, {label_is("DIRECTOR")}},
        {"r", PatternNodeKind::Attribute, {label_is("Rating")}},
        {"v", PatternNodeKind::Literal, {{PredicateTarget::LiteralValue, {}, CompareOp::Greater, Value(7.0)}}},
    };
    p.edges = {
        {"m", "a", PatternEdgeKind::Entity, std::nullopt, {edge_label_is("ACTS")}, {}},
        {"m", "d", PatternEdgeKind::Entity, std::nullopt, {edge_label_is("DIRECTS")}, {}},
        {"m", "r", PatternEdgeKind::Attribute, std::nullopt, {}, {}},
        {"r", "v", PatternEdgeKind::Literal, std::nullopt,
         {{PredicateTarget::EdgeAttribute, "Type", CompareOp::Equal, Value("Audience")}}, {}},
    };
    return p;
}

Assertion movie_assertion() { return {"rated-and-cast", movie_assertion_pattern(), {"m"}}; }

Multiplicity movies_need_actors() { return {"MOVIE", "ACTS", "ACTOR", {1, std::nullopt}, {0, std::nullopt}, std::nullopt}; }

GraphPattern top_movies_pattern()
{
    GraphPattern p;
    p.nodes = {
        {"m", PatternNodeKind::Entity, {label_is("MOVIE")}},
        {"a", PatternNodeKind::Entity, {label_is("ACTOR")}},
        {"r", PatternNodeKind::Attribute, {label_is("Rating")}},
        {"v", PatternNodeKind::Literal, {{PredicateTarget::LiteralValue, {}, CompareOp::Greater, Value(7.0)}}},
    };
    p.edges = {
        {"m", "r", PatternEdgeKind::Attribute, std::nullopt, {}, {}},
        {"r", "v", PatternEdgeKind::Literal, std::nullopt,
         {{PredicateTarget::EdgeAttribute, "Type", CompareOp::Equal, Value("Audience")}}, {}},
        {"m", "a", PatternEdgeKind::Entity, std::nullopt,
         {edge_label_is("ACTS"), {PredicateTarget::EdgeAttribute, "ranking", CompareOp::Equal, Value(1)}}, {}},
    };
    return p;
}

GraphPattern coactor_pattern()
{
    GraphPattern p;
    p.nodes = {
        {"m", PatternNodeKind::Entity, {label_is("MOVIE")}},
        {"a1", PatternNodeKind::Entity, {label_is("ACTOR")}},
        {"a2", PatternNodeKind::Entity, {label_is("ACTOR")}},
    };
    p.edges = {
        {"m", "a1", PatternEdgeKind::Entity, std::nullopt, {edge_label_is("ACTS")}, {}},
        {"m", "a2", PatternEdgeKind::Entity, std::nullopt, {edge_label_is("ACTS")}, {}},
    };
    return p;
}

GraphTemplate coactor_template()
{
    GraphTemplate t;
    t.entities = {
        {"x1", TemplateValue::of("ACTOR"), {{"ActorName", TemplateValue::ref("a1", "ActorName")}}},
        {"x2", TemplateValue::of("ACTOR"), {{"ActorName", TemplateValue::ref("a2", "ActorName")}}},
    };
    t.edges = {{"x1", "x2", EntityEdgeKind::Association, TemplateValue::of("Co-Acts"), {}, true}};
    return t;
}

GraphTemplate copy_template(const GraphPattern& p)
{
    GraphTemplate t;
    for (const auto& n : p.nodes)
        if (n.kind == PatternNodeKind::Entity)
            t.entities.push_back({"x_" + n.var, TemplateValue::ref(n.var),
                                  {{"name", TemplateValue::ref(n.var, "name")}, {"num", TemplateValue::ref(n.var, "num")}}});
    for (const auto& e : p.edges) {
        if (e.kind == PatternEdgeKind::Entity)
            t.edges.push_back({"x_" + e.start_var, "x_" + e.end_var, EntityEdgeKind::Association, TemplateValue::ref(e.end_var), {}, false});
        if (e.kind == PatternEdgeKind::Attribute)
            t.attributes.push_back({"y_" + e.end_var, "x_" + e.start_var, TemplateValue::ref(e.end_var)});
    }
    for (const auto& e : p.edges) {
        if (e.kind != PatternEdgeKind::Literal) continue;
        const bool parent_copied = std::any_of(t.attributes.begin(), t.attributes.end(),
                                               [&](const TemplateAttribute& a) { return a.var == "y_" + e.start_var; });
        if (parent_copied) t.literals.push_back({"y_" + e.start_var, TemplateValue::ref(e.end_var), {{"src", TemplateValue::ref(e.end_var, "src")}}});
    }
    return t;
}

std::filesystem::path data_dir() { return GRAD_TEST_DATA; }

std::string canonical(const GradGraph& g) { return save(g); }

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items)
{
    return items[uniform(rng, 0, items.size() - 1)];
}

const std::vector<std::string> kClasses{"A", "B", "C"};
const std::vector<std::string> kEdgeLabels{"R", "S"};
const std::vector<std::string> kAttributeLabels{"p", "q", "r"};
const std::vector<std::string> kSources{"x", "y"};

Value random_scalar(Rng& rng)
{
    switch (uniform(rng, 0, 3)) {
    case 0: return Value(static_cast<int>(uniform(rng, 0, 9)));
    case 1: return Value(static_cast<double>(uniform(rng, 0, 9)) + 0.5);
    case 2: return Value("t" + std::to_string(uniform(rng, 0, 4)));
    default: return Value(chance(rng, 0.5));
    }
}

}  // namespace

GradGraph random_graph(Rng& rng, const GraphShape& shape)
{
    GradGraph g;
    const std::size_t n = uniform(rng, 0, shape.max_entities);
    std::vector<NodeId> entities;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = shape.unique_keys ? i : uniform(rng, 0, static_cast<std::size_t>(shape.id_range - 1));
        Identifiers ids{{"name", Value(shape.key_prefix + std::to_string(j))}};
        if (j % 2 == 0) ids.emplace("num", static_cast<int>(j));
        entities.push_back(g.add_entity_node(pick(rng, kClasses), std::move(ids)));
    }

    // Parent-kind edges only run C -> A (Composition) and B -> A
    // (Generalization), so they cannot form cycles.
    std::vector<NodeId> as;
    for (NodeId e : entities)
        if (g.entity(e).class_label == "A") as.push_back(e);
    for (NodeId e : entities) {
        const auto& cls = g.entity(e).class_label;
        if (as.empty() || !shape.compositions) break;
        if (cls == "C" && chance(rng, 0.6)) g.add_entity_edge(e, pick(rng, as), EntityEdgeKind::Composition, "PART_OF");
        if (cls == "B" && chance(rng, 0.3)) g.add_entity_edge(e, pick(rng, as), EntityEdgeKind::Generalization, "IS_A");
    }

    if (!entities.empty()) {
        const std::size_t edges = uniform(rng, 0, 2 * entities.size());
        for (std::size_t i = 0; i < edges; ++i) {
            const NodeId s = pick(rng, entities);
            const NodeId t = pick(rng, entities);
            std::string label = pick(rng, kEdgeLabels);
            if (shape.consistent_labels) label += "_" + g.entity(t).class_label;
            if (!shape.parallel_edges) {
                bool exists = false;
                for (EdgeId e : g.out_edges(s))
                    if (g.entity_edge(e).end == t && g.entity_edge(e).label == label) exists = true;
                if (exists) continue;
            }
            Properties attrs;
            if (shape.edge_attributes && chance(rng, 0.5)) attrs.emplace("w", static_cast<int>(uniform(rng, 0, 3)));
            g.add_entity_edge(s, t, EntityEdgeKind::Association, label, std::move(attrs));
        }
    }

    for (NodeId e : entities) {
        std::vector<std::string> labels = kAttributeLabels;
        std::shuffle(labels.begin(), labels.end(), rng);
        labels.resize(uniform(rng, 0, std::min(shape.max_attributes, labels.size())));
        for (const auto& label : labels) {
            if (g.node_count() >= shape.max_nodes) return g;
            const NodeId a = g.add_attribute(e, label);
            const std::size_t lits = uniform(rng, 0, 2);
            for (std::size_t k = 0; k < lits && g.node_count() < shape.max_nodes; ++k) {
                Properties ctx;
                if (chance(rng, 0.7)) ctx.emplace("src", pick(rng, kSources));
                g.add_literal(a, random_scalar(rng), std::move(ctx));
            }
        }
    }
    return g;
}

GradGraph random_valid_graph(Rng& rng, const std::string& key_prefix)
{
    GraphShape shape;
    shape.unique_keys = true;
    shape.parallel_edges = false;
    shape.consistent_labels = true;
    shape.key_prefix = key_prefix;
    return random_graph(rng, shape);
}

namespace {

CompareOp random_op(Rng& rng)
{
    static const std::vector<CompareOp> ops{CompareOp::Less,         CompareOp::LessEqual, CompareOp::Equal,
                                            CompareOp::GreaterEqual, CompareOp::Greater,   CompareOp::NotEqual};
    return pick(rng, ops);
}

/// A constant taken from the graph when possible, so predicates can hold.
Value sample_identifier(Rng& rng, const GradGraph& g, std::string& name)
{
    std::vector<std::pair<std::string, Value>> pool;
    for (const auto& [_, node] : g.entity_nodes())
        for (const auto& kv : node.identifiers) pool.push_back(kv);
    if (pool.empty() || chance(rng, 0.2)) {
        name = chance(rng, 0.5) ? "name" : "num";
        return random_scalar(rng);
    }
    const auto& kv = pick(rng, pool);
    name = kv.first;
    return kv.second;
}

GraphPattern attempt(Rng& rng, const GradGraph& g, std::size_t max_nodes)
{
    GraphPattern p;
    std::vector<std::string> entity_vars, attribute_vars;
    const std::size_t k = uniform(rng, 1, max_nodes);
    for (std::size_t i = 0; i < k; ++i) {
        const std::string var = "x" + std::to_string(i);
        std::size_t kind = entity_vars.empty() ? 0 : uniform(rng, 0, 2);
        if (kind == 2 && attribute_vars.empty()) kind = 1;

        PatternNode node{var, PatternNodeKind::Entity, {}};
        if (kind == 0) {
            if (chance(rng, 0.6)) node.predicates.push_back(label_is(chance(rng, 0.9) ? pick(rng, kClasses) : "D"));
            if (chance(rng, 0.3)) {
                std::string name;
                Value c = sample_identifier(rng, g, name);
                node.predicates.push_back({PredicateTarget::Identifier, name, chance(rng, 0.5) ? CompareOp::Equal : random_op(rng), c});
            }
            if (!entity_vars.empty() && chance(rng, 0.75)) {
                PatternEdge e{pick(rng, entity_vars), var, PatternEdgeKind::Entity, std::nullopt, {}, {}};
                if (chance(rng, 0.5)) std::swap(e.start_var, e.end_var);
                if (chance(rng, 0.5)) e.predicates.push_back(edge_label_is(chance(rng, 0.8) ? pick(rng, kEdgeLabels) : "PART_OF"));
                if (chance(rng, 0.3))
                    e.predicates.push_back({PredicateTarget::EdgeAttribute, "w", random_op(rng), Value(static_cast<int>(uniform(rng, 0, 3)))});
                if (chance(rng, 0.15)) e.entity_kind = chance(rng, 0.5) ? EntityEdgeKind::Association : EntityEdgeKind::Composition;
                p.edges.push_back(std::move(e));
            }
            entity_vars.push_back(var);
        } else if (kind == 1) {
            node.kind = PatternNodeKind::Attribute;
            if (chance(rng, 0.7)) node.predicates.push_back(label_is(pick(rng, kAttributeLabels)));
            p.edges.push_back({pick(rng, entity_vars), var, PatternEdgeKind::Attribute, std::nullopt, {}, {}});
            attribute_vars.push_back(var);
        } else {
            node.kind = PatternNodeKind::Literal;
            if (chance(rng, 0.5)) node.predicates.push_back({PredicateTarget::LiteralValue, {}, random_op(rng), random_scalar(rng)});
            PatternEdge e{pick(rng, attribute_vars), var, PatternEdgeKind::Literal, std::nullopt, {}, {}};
            if (chance(rng, 0.3))
                e.predicates.push_back({PredicateTarget::EdgeAttribute, "src", CompareOp::Equal, Value(pick(rng, kSources))});
            p.edges.push_back(std::move(e));
        }
        p.nodes.push_back(std::move(node));
    }
    // An occasional extra edge closes a cycle or doubles a connection.
    if (entity_vars.size() >= 2 && chance(rng, 0.3))
        p.edges.push_back({pick(rng, entity_vars), pick(rng, entity_vars), PatternEdgeKind::Entity, std::nullopt,
                           {edge_label_is(pick(rng, kEdgeLabels))}, {}});
    return p;
}

}  // namespace

GraphPattern random_pattern(Rng& rng, const GradGraph& g, std::size_t max_nodes)
{
    while (true) {
        GraphPattern p = attempt(rng, g, max_nodes);
        if (validate_pattern(p, g).empty()) return p;
    }
}

std::vector<Match> sorted(std::vector<Match> matches)
{
    std::sort(matches.begin(), matches.end());
    return matches;
}

}  // namespace grad::testing
