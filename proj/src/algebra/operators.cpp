#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "grad/algebra.hpp"
#include "grad/identity.hpp"

namespace grad {

namespace {

std::vector<IdentityKey> member_key(const GradGraph& g)
{
    std::vector<IdentityKey> keys;
    for (const auto& [id, _] : g.entity_nodes()) keys.push_back(ordering_key(g, id));
    std::sort(keys.begin(), keys.end());
    return keys;
}

std::vector<NodeId> strong_nodes(const GradGraph& g)
{
    std::vector<NodeId> out;
    const CanonicalIndex index(g);
    for (NodeId id : index.entities())
        if (!g.composition_parent(id)) out.push_back(id);
    return out;
}

AtomicPredicate equals(PredicateTarget target, std::string name, Value constant)
{
    return {target, std::move(name), CompareOp::Equal, std::move(constant)};
}

/// Pattern plus, per variable and per pattern edge, the element it copies.
struct ExactPattern {
    GraphPattern pattern;
    std::map<std::string, NodeId> source_node;
    std::vector<EdgeId> source_edge;
};

ExactPattern build_exact(const GradGraph& h, const std::set<NodeId>& entities)
{
    const CanonicalIndex index(h);
    ExactPattern out;
    std::map<NodeId, std::string> var;
    auto declare = [&](NodeId id, PatternNodeKind kind, std::vector<AtomicPredicate> preds) {
        const char* prefix = kind == PatternNodeKind::Entity ? "e" : kind == PatternNodeKind::Attribute ? "a" : "l";
        const std::string name = prefix + std::to_string(index.rank(id));
        var[id] = name;
        out.source_node[name] = id;
        out.pattern.nodes.push_back({name, kind, std::move(preds)});
    };

    for (NodeId id : index.entities()) {
        if (!entities.count(id)) continue;
        const auto& node = h.entity(id);
        std::vector<AtomicPredicate> preds{equals(PredicateTarget::NodeLabel, {}, node.class_label)};
        for (const auto& [name, value] : node.identifiers) preds.push_back(equals(PredicateTarget::Identifier, name, value));
        declare(id, PatternNodeKind::Entity, std::move(preds));
    }
    for (NodeId id : index.attributes()) {
        const auto& attr = h.attribute(id);
        if (!entities.count(attr.parent)) continue;
        declare(id, PatternNodeKind::Attribute, {equals(PredicateTarget::NodeLabel, {}, attr.label)});
        out.pattern.edges.push_back({var.at(attr.parent), var.at(id), PatternEdgeKind::Attribute, std::nullopt, {}, {}});
        out.source_edge.push_back(attr.edge);
    }
    for (NodeId id : index.literals()) {
        const auto& lit = h.literal(id);
        if (!var.count(lit.parent)) continue;
        declare(id, PatternNodeKind::Literal, {equals(PredicateTarget::LiteralValue, {}, lit.value)});
        std::vector<AtomicPredicate> preds;
        for (const auto& [name, value] : h.literal_edge(lit.edge).context)
            preds.push_back(equals(PredicateTarget::EdgeAttribute, name, value));
        out.pattern.edges.push_back({var.at(lit.parent), var.at(id), PatternEdgeKind::Literal, std::nullopt, std::move(preds), {}});
        out.source_edge.push_back(lit.edge);
    }
    for (EdgeId id : index.entity_edges()) {
        const auto& edge = h.entity_edge(id);
        if (!entities.count(edge.start)) continue;
        std::vector<AtomicPredicate> preds{equals(PredicateTarget::EdgeLabel, {}, edge.label)};
        for (const auto& [name, value] : edge.attributes) preds.push_back(equals(PredicateTarget::EdgeAttribute, name, value));
        out.pattern.edges.push_back({var.at(edge.start), var.at(edge.end), PatternEdgeKind::Entity, edge.kind, std::move(preds), {}});
        out.source_edge.push_back(id);
    }
    return out;
}

/// Predicate equality widens numbers; a copy must also agree on value types
/// and carry no extra identifiers, edge attributes or context entries.
bool exact_copy(const GradGraph& g, const GradGraph& h, const ExactPattern& x, const Match& m)
{
    for (const auto& [name, src] : x.source_node) {
        const NodeId id = m.nodes.at(name);
        switch (*h.kind_of(src)) {
        case NodeKind::Entity:
            if (compare(g.entity(id).identifiers, h.entity(src).identifiers) != 0) return false;
            break;
        case NodeKind::Literal:
            if (!(g.literal(id).value == h.literal(src).value)) return false;
            break;
        case NodeKind::Attribute: break;
        }
    }
    for (std::size_t j = 0; j < x.source_edge.size(); ++j) {
        const EdgeId src = x.source_edge[j];
        const EdgeId id = m.edges[j];
        switch (*h.kind_of(src)) {
        case EdgeKind::Entity:
            if (compare(g.entity_edge(id).attributes, h.entity_edge(src).attributes) != 0) return false;
            break;
        case EdgeKind::Literal:
            if (compare(g.literal_edge(id).context, h.literal_edge(src).context) != 0) return false;
            break;
        case EdgeKind::Attribute: break;
        }
    }
    return true;
}

/// Entity nodes of `h` grouped by connectivity through entity edges.
std::vector<std::set<NodeId>> components(const GradGraph& h)
{
    std::map<NodeId, NodeId> parent;
    for (const auto& [id, _] : h.entity_nodes()) parent[id] = id;
    auto root = [&](NodeId x) {
        while (!(parent[x] == x)) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [_, e] : h.entity_edges()) {
        NodeId a = root(e.start), b = root(e.end);
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
    std::map<NodeId, std::set<NodeId>> groups;
    for (const auto& [id, _] : h.entity_nodes()) groups[root(id)].insert(id);
    std::vector<std::set<NodeId>> out;
    for (auto& [_, set] : groups) out.push_back(std::move(set));
    return out;
}

}  // namespace

void sort_canonical(GraphCollection& c)
{
    std::vector<std::vector<IdentityKey>> keys;
    for (const auto& g : c.graphs) keys.push_back(member_key(g));
    std::vector<std::size_t> perm(c.graphs.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<GradGraph> sorted;
    sorted.reserve(perm.size());
    for (std::size_t i : perm) sorted.push_back(std::move(c.graphs[i]));
    c.graphs = std::move(sorted);
}

void check_well_formed(const JoinPredicate& pr)
{
    if (pr.rules.empty()) throw GradError(ErrorCode::InvalidJoinPredicate, "join predicate has no merge rule");
    for (const auto& rule : pr.rules) {
        if (rule.class_label.empty()) throw GradError(ErrorCode::InvalidJoinPredicate, "merge rule without a class");
        if (rule.match_on.empty())
            throw GradError(ErrorCode::InvalidJoinPredicate, "merge rule for " + rule.class_label + " names no identifier");
        for (const auto& name : rule.match_on)
            if (name.empty()) throw GradError(ErrorCode::InvalidJoinPredicate, "merge rule for " + rule.class_label + " has an empty identifier name");
    }
}

bool satisfies(const JoinPredicate& pr, const EntityNode& a, const EntityNode& b)
{
    if (a.class_label != b.class_label) return false;
    for (const auto& rule : pr.rules) {
        if (rule.class_label != a.class_label) continue;
        bool all = true;
        for (const auto& name : rule.match_on) {
            auto x = a.identifiers.find(name);
            auto y = b.identifiers.find(name);
            if (x == a.identifiers.end() || y == b.identifiers.end() || !(x->second == y->second)) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

GraphCollection selection(const GradGraph& g, const GraphPattern& p, const MatchOptions& options)
{
    require_valid(validate_pattern(p, g));
    GraphCollection out;
    for (const auto& m : match(g, p, options).matches) out.graphs.push_back(matched_subgraph(g, m));
    return out;
}

GraphCollection cartesian_product(const GraphCollection& s1, const GraphCollection& s2)
{
    GraphCollection out;
    out.graphs.reserve(s1.size() * s2.size());
    for (const auto& a : s1.graphs)
        for (const auto& b : s2.graphs) {
            GradGraph pair;
            pair.append(a);
            pair.append(b);
            out.graphs.push_back(std::move(pair));
        }
    return out;
}

GradGraph composition(const GradGraph& g, const GraphPattern& p, const GraphTemplate& t, const MatchOptions& options)
{
    require_valid(validate_pattern(p, g));
    check_template(t, p);
    GradGraph out;
    GraphIntegrator integrator(out);
    for (const auto& m : match(g, p, options).matches) integrator.fold(instantiate(t, p, g, m));
    return out;
}

GradGraph graph_union(const GradGraph& g, const GradGraph& h)
{
    GradGraph out;
    out.append(g);
    out.append(h);
    return out;
}

GraphPattern exact_pattern(const GradGraph& h)
{
    std::set<NodeId> all;
    for (const auto& [id, _] : h.entity_nodes()) all.insert(id);
    return build_exact(h, all).pattern;
}

GradGraph difference(const GradGraph& g, const GradGraph& h)
{
    GradGraph out;
    out.append(g);

    std::set<NodeId> doomed_nodes;
    std::set<EdgeId> doomed_edges;
    for (const auto& component : components(h)) {
        const ExactPattern x = build_exact(h, component);
        for (const auto& m : match(out, x.pattern).matches) {
            if (!exact_copy(out, h, x, m)) continue;
            for (const auto& [_, id] : m.nodes) doomed_nodes.insert(id);
            doomed_edges.insert(m.edges.begin(), m.edges.end());
        }
    }
    for (EdgeId e : doomed_edges)
        if (out.kind_of(e) == EdgeKind::Entity) out.remove_edge(e);
    for (NodeId n : doomed_nodes)
        if (out.contains(n)) out.remove_node(n);
    return out;
}

GraphCollection join(const GraphCollection& s1, const GraphCollection& s2, const JoinPredicate& pr,
                     std::vector<std::string>* warnings)
{
    check_well_formed(pr);
    GraphCollection out;
    for (const auto& a : s1.graphs) {
        const auto left = strong_nodes(a);
        for (const auto& b : s2.graphs) {
            bool related = false;
            for (NodeId y : strong_nodes(b)) {
                for (NodeId x : left)
                    if (satisfies(pr, a.entity(x), b.entity(y))) related = true;
                if (related) break;
            }
            if (!related) continue;

            GradGraph merged;
            const HandleMap copied = merged.append(a);
            std::vector<NodeId> candidates;
            for (NodeId x : left) candidates.push_back(copied.nodes.at(x));

            GraphIntegrator integrator(merged);
            integrator.fold(b, [&](const EntityNode& incoming) -> std::optional<NodeId> {
                for (NodeId x : candidates)
                    if (satisfies(pr, merged.entity(x), incoming)) return x;
                return std::nullopt;
            });
            if (warnings) warnings->insert(warnings->end(), integrator.warnings().begin(), integrator.warnings().end());
            out.graphs.push_back(std::move(merged));
        }
    }
    return out;
}

}  // namespace grad
