// Reference matcher. Shares only predicate evaluation with the production
// matcher: no candidate filtering, no reordering, no adjacency indexes.

#include <set>

#include "grad/matcher.hpp"

namespace grad {

namespace {

struct ElementRef {
    NodeKind kind;
    NodeId id;
};

const Value* property(const Properties& props, const std::string& name)
{
    auto it = props.find(name);
    return it == props.end() ? nullptr : &it->second;
}

bool all_hold(const std::vector<AtomicPredicate>& preds, const GradGraph& g, const ElementRef& el)
{
    for (const auto& pred : preds) {
        const Value* actual = nullptr;
        Value label;
        switch (pred.target) {
        case PredicateTarget::NodeLabel:
            if (el.kind == NodeKind::Entity) label = Value(g.entity(el.id).class_label);
            else if (el.kind == NodeKind::Attribute) label = Value(g.attribute(el.id).label);
            else return false;
            actual = &label;
            break;
        case PredicateTarget::Identifier:
            if (el.kind != NodeKind::Entity) return false;
            actual = property(g.entity(el.id).identifiers, pred.name);
            break;
        case PredicateTarget::LiteralValue:
            if (el.kind != NodeKind::Literal) return false;
            actual = &g.literal(el.id).value;
            break;
        default: return false;
        }
        if (!evaluate(pred, actual)) return false;
    }
    return true;
}

bool kind_fits(PatternNodeKind pk, NodeKind nk)
{
    return (pk == PatternNodeKind::Entity && nk == NodeKind::Entity) ||
           (pk == PatternNodeKind::Attribute && nk == NodeKind::Attribute) ||
           (pk == PatternNodeKind::Literal && nk == NodeKind::Literal);
}

/// Scans the whole edge store for images of one pattern edge.
std::vector<EdgeId> scan_edges(const GradGraph& g, const PatternEdge& pe, NodeId s, NodeId t)
{
    std::vector<EdgeId> out;
    switch (pe.kind) {
    case PatternEdgeKind::Entity:
        for (const auto& [id, e] : g.entity_edges()) {
            if (e.start != s || e.end != t) continue;
            if (pe.entity_kind && *pe.entity_kind != e.kind) continue;
            bool ok = true;
            for (const auto& pred : pe.predicates) {
                Value label(e.label);
                const Value* actual = pred.target == PredicateTarget::EdgeLabel ? &label : property(e.attributes, pred.name);
                if (!evaluate(pred, actual)) ok = false;
            }
            if (ok) out.push_back(id);
        }
        break;
    case PatternEdgeKind::Attribute:
        for (const auto& [id, e] : g.attribute_edges())
            if (e.start == s && e.end == t && pe.predicates.empty()) out.push_back(id);
        break;
    case PatternEdgeKind::Literal:
        for (const auto& [id, e] : g.literal_edges()) {
            if (e.start != s || e.end != t) continue;
            bool ok = true;
            for (const auto& pred : pe.predicates)
                if (!evaluate(pred, property(e.context, pred.name))) ok = false;
            if (ok) out.push_back(id);
        }
        break;
    }
    return out;
}

struct Enumerator {
    const GradGraph& g;
    const GraphPattern& p;
    std::vector<ElementRef> universe;
    std::vector<std::size_t> assignment;  // index into universe per pattern node
    std::vector<bool> taken;
    std::vector<Match> results;

    NodeId bound(const std::string& var) const
    {
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (p.nodes[i].var == var) return universe[assignment[i]].id;
        return {};
    }

    bool assigned(const std::string& var) const
    {
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (p.nodes[i].var == var) return true;
        return false;
    }

    void assign(std::size_t depth)
    {
        if (depth == p.nodes.size()) {
            bind_edges();
            return;
        }
        for (std::size_t u = 0; u < universe.size(); ++u) {
            if (taken[u]) continue;
            const auto& el = universe[u];
            if (!kind_fits(p.nodes[depth].kind, el.kind) || !all_hold(p.nodes[depth].predicates, g, el)) continue;
            assignment.push_back(u);
            taken[u] = true;
            bool ok = true;
            for (const auto& pe : p.edges) {
                if (!assigned(pe.start_var) || !assigned(pe.end_var)) continue;
                if (pe.start_var != p.nodes[depth].var && pe.end_var != p.nodes[depth].var) continue;
                if (scan_edges(g, pe, bound(pe.start_var), bound(pe.end_var)).empty()) ok = false;
            }
            if (ok) assign(depth + 1);
            taken[u] = false;
            assignment.pop_back();
        }
    }

    void bind_edges()
    {
        std::vector<std::vector<EdgeId>> options;
        for (const auto& pe : p.edges) options.push_back(scan_edges(g, pe, bound(pe.start_var), bound(pe.end_var)));
        std::vector<EdgeId> chosen;
        product(options, chosen);
    }

    void product(const std::vector<std::vector<EdgeId>>& options, std::vector<EdgeId>& chosen)
    {
        if (chosen.size() == options.size()) {
            std::set<EdgeId> distinct(chosen.begin(), chosen.end());
            if (distinct.size() != chosen.size()) return;
            Match m;
            for (std::size_t i = 0; i < p.nodes.size(); ++i) m.nodes.emplace(p.nodes[i].var, universe[assignment[i]].id);
            m.edges = chosen;
            results.push_back(std::move(m));
            return;
        }
        for (EdgeId e : options[chosen.size()]) {
            chosen.push_back(e);
            product(options, chosen);
            chosen.pop_back();
        }
    }
};

}  // namespace

MatchSet brute_force_match(const GradGraph& g, const GraphPattern& p, const BruteForceCaps& caps)
{
    if (p.nodes.size() > caps.max_pattern_nodes)
        throw GradError(ErrorCode::CapExceeded, "pattern has " + std::to_string(p.nodes.size()) + " nodes");
    if (g.node_count() > caps.max_graph_nodes)
        throw GradError(ErrorCode::CapExceeded, "graph has " + std::to_string(g.node_count()) + " nodes");
    require_valid(validate_pattern(p));

    Enumerator en{g, p, {}, {}, {}, {}};
    for (const auto& [id, _] : g.entity_nodes()) en.universe.push_back({NodeKind::Entity, id});
    for (const auto& [id, _] : g.attribute_nodes()) en.universe.push_back({NodeKind::Attribute, id});
    for (const auto& [id, _] : g.literal_nodes()) en.universe.push_back({NodeKind::Literal, id});
    en.taken.assign(en.universe.size(), false);
    en.assign(0);

    MatchSet result;
    result.matches = std::move(en.results);
    canonicalize(g, p, result.matches);
    return result;
}

}  // namespace grad
