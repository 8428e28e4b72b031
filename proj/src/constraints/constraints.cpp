#include "grad/constraints.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "grad/identity.hpp"
#include "grad/matcher.hpp"

namespace grad {

namespace {

std::string handle(NodeId id) { return "#" + std::to_string(id.value); }
std::string handle(EdgeId id) { return "#e" + std::to_string(id.value); }

std::string key_text(const GradGraph& g, NodeId id) { return ordering_key(g, id).to_string(); }

std::string render(const Properties& props)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [name, value] : props) {
        if (!first) out += ",";
        first = false;
        out += name + "=" + value.to_display();
    }
    return out + "}";
}

void sort_violations(std::vector<Violation>& v)
{
    std::sort(v.begin(), v.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.rule, a.elements, a.detail) < std::tie(b.rule, b.elements, b.detail);
    });
}

void check_cycles(const GradGraph& g, EntityEdgeKind kind, std::vector<Violation>& out)
{
    std::map<NodeId, NodeId> next;
    for (const auto& [_, e] : g.entity_edges())
        if (e.kind == kind) next.emplace(e.start, e.end);  // at most one per start

    std::set<NodeId> done;
    for (const auto& [start, _] : next) {
        std::vector<NodeId> path;
        std::map<NodeId, std::size_t> on_path;
        NodeId cur = start;
        bool cycle = false;
        while (!done.count(cur)) {
            if (on_path.count(cur)) {
                cycle = true;
                break;
            }
            on_path[cur] = path.size();
            path.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end()) break;
            cur = it->second;
        }
        if (cycle) {
            Violation v{kind == EntityEdgeKind::Composition ? Rule::CompositionCycle : Rule::HierarchyCycle,
                        Severity::Error, {}, std::string(to_string(kind)) + " cycle"};
            for (std::size_t i = on_path.at(cur); i < path.size(); ++i) v.elements.push_back(key_text(g, path[i]));
            std::sort(v.elements.begin(), v.elements.end());
            out.push_back(std::move(v));
        }
        done.insert(path.begin(), path.end());
    }
}

bool selects_class(const PatternNode& node, std::optional<std::string>& class_label)
{
    for (const auto& pred : node.predicates) {
        if (pred.target == PredicateTarget::NodeLabel && pred.op == CompareOp::Equal &&
            pred.constant.type() == Value::Type::Text) {
            class_label = pred.constant.as_string();
            return true;
        }
    }
    return false;
}

}  // namespace

const char* to_string(Rule rule)
{
    switch (rule) {
    case Rule::DanglingReference: return "DanglingReference";
    case Rule::ParentEdgeCardinality: return "ParentEdgeCardinality";
    case Rule::CompositionCycle: return "CompositionCycle";
    case Rule::HierarchyCycle: return "HierarchyCycle";
    case Rule::DuplicateEntityIdentity: return "DuplicateEntityIdentity";
    case Rule::DuplicateEdgeIdentity: return "DuplicateEdgeIdentity";
    case Rule::DuplicateAttributeIdentity: return "DuplicateAttributeIdentity";
    case Rule::EdgeLabelClassConflict: return "EdgeLabelClassConflict";
    case Rule::AssertionFailed: return "AssertionFailed";
    case Rule::MultiplicityFailed: return "MultiplicityFailed";
    case Rule::DuplicateLiteralContext: return "DuplicateLiteralContext";
    }
    return "?";
}

const char* to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string CountRange::to_string() const
{
    return "[" + std::to_string(min) + ".." + (max ? std::to_string(*max) : std::string("*")) + "]";
}

std::string Multiplicity::to_string() const
{
    return source_class + " " + edge_label + " " + target_class + " " + forward.to_string() + " " + backward.to_string();
}

void check_well_formed(const Multiplicity& m)
{
    if (m.source_class.empty() || m.edge_label.empty() || m.target_class.empty())
        throw GradError(ErrorCode::InvalidMultiplicity, "classes and edge label must be non-empty");
    for (const auto* r : {&m.forward, &m.backward})
        if (r->max && *r->max < r->min)
            throw GradError(ErrorCode::InvalidMultiplicity, m.to_string() + ": minimum above maximum");
    if (m.edge_kind && is_parent_kind(*m.edge_kind) && (!m.forward.max || *m.forward.max > 1))
        throw GradError(ErrorCode::InvalidMultiplicity,
                        m.to_string() + ": a " + to_string(*m.edge_kind) + " edge is to-one on the source side");
}

void check_well_formed(const Assertion& a)
{
    if (a.anchor_vars.empty()) throw GradError(ErrorCode::InvalidAssertion, a.name + ": no anchor variable");
    for (const auto& var : a.anchor_vars) {
        auto idx = a.pattern.node_index(var);
        if (!idx || a.pattern.nodes[*idx].kind != PatternNodeKind::Entity)
            throw GradError(ErrorCode::InvalidAssertion, a.name + ": anchor '" + var + "' is not an entity pattern node");
    }
}

std::vector<Violation> check_structure(const GradGraph& g)
{
    std::vector<Violation> out;
    auto dangling = [&](std::string element, std::string detail) {
        out.push_back({Rule::DanglingReference, Severity::Error, {std::move(element)}, std::move(detail)});
    };

    for (const auto& [id, _] : g.entity_nodes())
        if (g.attribute_nodes().count(id) || g.literal_nodes().count(id)) dangling(handle(id), "node in several partitions");
    for (const auto& [id, _] : g.attribute_nodes())
        if (g.literal_nodes().count(id)) dangling(handle(id), "node in several partitions");

    for (const auto& [id, e] : g.entity_edges())
        if (!g.entity_nodes().count(e.start) || !g.entity_nodes().count(e.end)) dangling(handle(id), "entity edge endpoint missing");

    std::map<NodeId, int> attr_parents;
    for (const auto& [id, e] : g.attribute_edges()) {
        if (!g.entity_nodes().count(e.start) || !g.attribute_nodes().count(e.end)) dangling(handle(id), "attribute edge endpoint missing");
        ++attr_parents[e.end];
    }
    std::map<NodeId, int> lit_parents;
    for (const auto& [id, e] : g.literal_edges()) {
        if (!g.attribute_nodes().count(e.start) || !g.literal_nodes().count(e.end)) dangling(handle(id), "literal edge endpoint missing");
        ++lit_parents[e.end];
    }
    for (const auto& [id, attr] : g.attribute_nodes()) {
        if (attr_parents[id] != 1) dangling(handle(id), "attribute node needs exactly one attribute edge");
        if (!g.entity_nodes().count(attr.parent)) dangling(handle(id), "attribute node parent missing");
    }
    for (const auto& [id, lit] : g.literal_nodes()) {
        if (lit_parents[id] != 1) dangling(handle(id), "literal node needs exactly one literal edge");
        if (!g.attribute_nodes().count(lit.parent)) dangling(handle(id), "literal node parent missing");
    }

    std::map<std::pair<NodeId, EntityEdgeKind>, int> parents;
    for (const auto& [_, e] : g.entity_edges())
        if (is_parent_kind(e.kind)) ++parents[{e.start, e.kind}];
    for (const auto& [key, n] : parents) {
        if (n > 1)
            out.push_back({Rule::ParentEdgeCardinality, Severity::Error, {handle(key.first)},
                           std::to_string(n) + " outgoing " + to_string(key.second) + " edges"});
    }
    sort_violations(out);
    return out;
}

std::vector<Violation> check_entity_integrity(const GradGraph& g, const IntegrityOptions& options)
{
    std::vector<Violation> out;

    std::map<IdentityKey, std::size_t> entity_keys;
    for (const auto& [id, _] : g.entity_nodes()) ++entity_keys[ordering_key(g, id)];
    for (const auto& [key, n] : entity_keys)
        if (n > 1) out.push_back({Rule::DuplicateEntityIdentity, Severity::Error, {key.to_string()}, std::to_string(n) + " entity nodes"});

    std::map<IdentityKey, std::size_t> edge_keys;
    for (const auto& [id, _] : g.entity_edges()) ++edge_keys[ordering_key(g, id)];
    for (const auto& [key, n] : edge_keys)
        if (n > 1) out.push_back({Rule::DuplicateEdgeIdentity, Severity::Error, {key.to_string()}, std::to_string(n) + " entity edges"});

    std::map<IdentityKey, std::size_t> attr_keys;
    for (const auto& [id, _] : g.attribute_nodes()) ++attr_keys[ordering_key(g, id)];
    for (const auto& [key, n] : attr_keys)
        if (n > 1)
            out.push_back({Rule::DuplicateAttributeIdentity, Severity::Error, {key.to_string()}, std::to_string(n) + " attribute nodes"});

    if (options.global_edge_labels) {
        std::map<std::string, std::set<std::pair<std::string, std::string>>> pairs;
        for (const auto& [_, e] : g.entity_edges())
            pairs[e.label].emplace(g.entity(e.start).class_label, g.entity(e.end).class_label);
        for (const auto& [label, set] : pairs) {
            if (set.size() < 2) continue;
            Violation v{Rule::EdgeLabelClassConflict, Severity::Error, {}, "label " + label + " links several class pairs"};
            for (const auto& [s, t] : set) v.elements.push_back(s + "->" + t);
            out.push_back(std::move(v));
        }
    } else {
        for (const auto& [id, _] : g.entity_nodes()) {
            std::map<std::string, std::set<std::string>> classes;
            for (EdgeId e : g.out_edges(id)) {
                const auto& edge = g.entity_edge(e);
                classes[edge.label].insert(g.entity(edge.end).class_label);
            }
            for (const auto& [label, set] : classes) {
                if (set.size() < 2) continue;
                std::string detail = "label " + label + " reaches classes";
                for (const auto& c : set) detail += " " + c;
                out.push_back({Rule::EdgeLabelClassConflict, Severity::Error, {key_text(g, id)}, detail});
            }
        }
    }

    for (auto kind : {EntityEdgeKind::Generalization, EntityEdgeKind::Aggregation, EntityEdgeKind::Composition})
        check_cycles(g, kind, out);

    for (const auto& [id, _] : g.attribute_nodes()) {
        std::map<Properties, std::size_t, bool (*)(const Properties&, const Properties&)> contexts(
            [](const Properties& a, const Properties& b) { return compare(a, b) < 0; });
        for (NodeId lit : g.literals_of(id)) ++contexts[g.literal_edge(g.literal(lit).edge).context];
        for (const auto& [ctx, n] : contexts)
            if (n > 1)
                out.push_back({Rule::DuplicateLiteralContext, Severity::Warning, {key_text(g, id)},
                               std::to_string(n) + " literals with context " + render(ctx)});
    }

    sort_violations(out);
    return out;
}

std::vector<Violation> check_assertion(const GradGraph& g, const Assertion& a)
{
    check_well_formed(a);
    const MatchSet matches = match(g, a.pattern);

    std::vector<Violation> out;
    for (const auto& var : a.anchor_vars) {
        std::set<NodeId> satisfied;
        for (const auto& m : matches.matches) satisfied.insert(m.nodes.at(var));

        std::optional<std::string> governed;
        selects_class(a.pattern.nodes[*a.pattern.node_index(var)], governed);
        for (const auto& [id, node] : g.entity_nodes()) {
            if (governed && node.class_label != *governed) continue;
            if (!satisfied.count(id))
                out.push_back({Rule::AssertionFailed, Severity::Error, {key_text(g, id)}, a.name});
        }
    }
    sort_violations(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Violation> check_multiplicity(const GradGraph& g, const Multiplicity& m)
{
    std::vector<Violation> out;
    for (const auto& [id, node] : g.entity_nodes()) {
        if (node.class_label == m.source_class) {
            std::size_t n = 0;
            for (EdgeId e : g.out_edges(id)) {
                const auto& edge = g.entity_edge(e);
                if (edge.label == m.edge_label && g.entity(edge.end).class_label == m.target_class) ++n;
            }
            if (!m.forward.contains(n))
                out.push_back({Rule::MultiplicityFailed, Severity::Error, {key_text(g, id)},
                               m.to_string() + " observed " + std::to_string(n)});
        }
        if (node.class_label == m.target_class) {
            std::size_t n = 0;
            for (EdgeId e : g.in_edges(id)) {
                const auto& edge = g.entity_edge(e);
                if (edge.label == m.edge_label && g.entity(edge.start).class_label == m.source_class) ++n;
            }
            if (!m.backward.contains(n))
                out.push_back({Rule::MultiplicityFailed, Severity::Error, {key_text(g, id)},
                               m.to_string() + " observed " + std::to_string(n) + " incoming"});
        }
    }
    sort_violations(out);
    return out;
}

ValidationReport validate(const GradGraph& g, const std::vector<Assertion>& assertions,
                          const std::vector<Multiplicity>& multiplicities, const IntegrityOptions& options)
{
    ValidationReport report;
    auto append = [&](std::vector<Violation> v) {
        report.violations.insert(report.violations.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    };
    append(check_structure(g));
    append(check_entity_integrity(g, options));
    for (const auto& a : assertions) append(check_assertion(g, a));
    for (const auto& m : multiplicities) {
        check_well_formed(m);
        append(check_multiplicity(g, m));
    }
    sort_violations(report.violations);
    for (const auto& v : report.violations) (v.severity == Severity::Error ? report.errors : report.warnings)++;
    return report;
}

}  // namespace grad
