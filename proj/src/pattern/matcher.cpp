#include "grad/matcher.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "grad/identity.hpp"

namespace grad {

namespace {

const Value* find_property(const Properties& props, const std::string& name)
{
    auto it = props.find(name);
    return it == props.end() ? nullptr : &it->second;
}

bool node_satisfies(const GradGraph& g, const PatternNode& pn, NodeId id)
{
    switch (pn.kind) {
    case PatternNodeKind::Entity: {
        const auto& node = g.entity(id);
        const Value label(node.class_label);
        for (const auto& pred : pn.predicates) {
            const Value* actual = pred.target == PredicateTarget::NodeLabel ? &label : find_property(node.identifiers, pred.name);
            if (!evaluate(pred, actual)) return false;
        }
        return true;
    }
    case PatternNodeKind::Attribute: {
        const Value label(g.attribute(id).label);
        for (const auto& pred : pn.predicates)
            if (!evaluate(pred, &label)) return false;
        return true;
    }
    case PatternNodeKind::Literal: {
        const Value& value = g.literal(id).value;
        for (const auto& pred : pn.predicates)
            if (!evaluate(pred, &value)) return false;
        return true;
    }
    }
    return false;
}

bool entity_edge_satisfies(const PatternEdge& pe, const EntityEdge& edge)
{
    if (pe.entity_kind && *pe.entity_kind != edge.kind) return false;
    const Value label(edge.label);
    for (const auto& pred : pe.predicates) {
        const Value* actual = pred.target == PredicateTarget::EdgeLabel ? &label : find_property(edge.attributes, pred.name);
        if (!evaluate(pred, actual)) return false;
    }
    return true;
}

bool literal_edge_satisfies(const PatternEdge& pe, const LiteralEdge& edge)
{
    for (const auto& pred : pe.predicates)
        if (!evaluate(pred, find_property(edge.context, pred.name))) return false;
    return true;
}

/// Data edges from `s` to `t` that satisfy pattern edge `pe`.
std::vector<EdgeId> edges_between(const GradGraph& g, const PatternEdge& pe, NodeId s, NodeId t)
{
    std::vector<EdgeId> out;
    switch (pe.kind) {
    case PatternEdgeKind::Entity:
        for (EdgeId e : g.out_edges(s)) {
            const auto& edge = g.entity_edge(e);
            if (edge.end == t && entity_edge_satisfies(pe, edge)) out.push_back(e);
        }
        break;
    case PatternEdgeKind::Attribute: {
        const auto& attr = g.attribute(t);
        if (attr.parent == s) out.push_back(attr.edge);
        break;
    }
    case PatternEdgeKind::Literal: {
        const auto& lit = g.literal(t);
        if (lit.parent == s && literal_edge_satisfies(pe, g.literal_edge(lit.edge))) out.push_back(lit.edge);
        break;
    }
    }
    return out;
}

NodeKind to_node_kind(PatternNodeKind kind)
{
    switch (kind) {
    case PatternNodeKind::Entity: return NodeKind::Entity;
    case PatternNodeKind::Attribute: return NodeKind::Attribute;
    case PatternNodeKind::Literal: return NodeKind::Literal;
    }
    return NodeKind::Entity;
}

class Backtracker {
public:
    Backtracker(const GradGraph& g, const GraphPattern& p, const MatchOptions& options)
        : g_(g), p_(p), options_(options), binding_(p.nodes.size()), bound_(p.nodes.size(), false)
    {
        for (std::size_t i = 0; i < p.nodes.size(); ++i) index_.emplace(p.nodes[i].var, i);
        endpoints_.reserve(p.edges.size());
        for (const auto& edge : p.edges) endpoints_.emplace_back(index_.at(edge.start_var), index_.at(edge.end_var));
        build_candidates();
        build_order();
    }

    std::vector<Match> run()
    {
        for (const auto& cands : candidates_)
            if (cands.empty()) return {};
        extend(0);
        return std::move(results_);
    }

private:
    void build_candidates()
    {
        const std::size_t n = p_.nodes.size();
        std::vector<std::size_t> out_entity(n), in_entity(n), attr_children(n), lit_children(n);
        for (std::size_t j = 0; j < p_.edges.size(); ++j) {
            auto [s, t] = endpoints_[j];
            switch (p_.edges[j].kind) {
            case PatternEdgeKind::Entity: ++out_entity[s]; ++in_entity[t]; break;
            case PatternEdgeKind::Attribute: ++attr_children[s]; break;
            case PatternEdgeKind::Literal: ++lit_children[s]; break;
            }
        }

        candidates_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& pn = p_.nodes[i];
            auto consider = [&](NodeId id) {
                if (!node_satisfies(g_, pn, id)) return;
                if (pn.kind == PatternNodeKind::Entity) {
                    if (g_.out_edges(id).size() < out_entity[i] || g_.in_edges(id).size() < in_entity[i]) return;
                    if (g_.attributes_of(id).size() < attr_children[i]) return;
                } else if (pn.kind == PatternNodeKind::Attribute) {
                    if (g_.literals_of(id).size() < lit_children[i]) return;
                }
                candidates_[i].push_back(id);
            };
            switch (to_node_kind(pn.kind)) {
            case NodeKind::Entity: for (const auto& [id, _] : g_.entity_nodes()) consider(id); break;
            case NodeKind::Attribute: for (const auto& [id, _] : g_.attribute_nodes()) consider(id); break;
            case NodeKind::Literal: for (const auto& [id, _] : g_.literal_nodes()) consider(id); break;
            }
        }
    }

    // Smallest candidate set first, then prefer nodes adjacent to the ones
    // already placed so edge checks prune early.
    void build_order()
    {
        const std::size_t n = p_.nodes.size();
        std::vector<bool> placed(n, false);
        std::vector<std::size_t> position(n);
        while (order_.size() < n) {
            std::size_t best = n;
            bool best_adjacent = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (placed[i]) continue;
                bool adjacent = false;
                for (auto [s, t] : endpoints_)
                    if ((s == i && placed[t]) || (t == i && placed[s])) adjacent = true;
                if (best == n || (adjacent && !best_adjacent) ||
                    (adjacent == best_adjacent && candidates_[i].size() < candidates_[best].size())) {
                    best = i;
                    best_adjacent = adjacent;
                }
            }
            placed[best] = true;
            position[best] = order_.size();
            order_.push_back(best);
        }
        // pattern edges are checked when their later endpoint is placed
        checks_.resize(n);
        for (std::size_t j = 0; j < p_.edges.size(); ++j) {
            auto [s, t] = endpoints_[j];
            checks_[std::max(position[s], position[t])].push_back(j);
        }
    }

    void extend(std::size_t depth)
    {
        if (depth == order_.size()) {
            emit();
            return;
        }
        const std::size_t var = order_[depth];
        for (NodeId cand : candidates_[var]) {
            if (used_.count(cand)) continue;
            binding_[var] = cand;
            bound_[var] = true;
            bool ok = true;
            for (std::size_t j : checks_[depth]) {
                auto [s, t] = endpoints_[j];
                if (edges_between(g_, p_.edges[j], binding_[s], binding_[t]).empty()) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                used_.insert(cand);
                extend(depth + 1);
                used_.erase(cand);
            }
            bound_[var] = false;
        }
    }

    void emit()
    {
        std::vector<std::vector<EdgeId>> options(p_.edges.size());
        for (std::size_t j = 0; j < p_.edges.size(); ++j) {
            auto [s, t] = endpoints_[j];
            options[j] = edges_between(g_, p_.edges[j], binding_[s], binding_[t]);
        }
        std::vector<EdgeId> chosen(p_.edges.size());
        std::set<EdgeId> used_edges;
        choose_edges(0, options, chosen, used_edges);
    }

    void choose_edges(std::size_t j, const std::vector<std::vector<EdgeId>>& options, std::vector<EdgeId>& chosen,
                      std::set<EdgeId>& used_edges)
    {
        if (j == options.size()) {
            Match m;
            for (std::size_t i = 0; i < p_.nodes.size(); ++i) m.nodes.emplace(p_.nodes[i].var, binding_[i]);
            m.edges = chosen;
            results_.push_back(std::move(m));
            if (options_.max_matches && results_.size() > options_.max_matches)
                throw GradError(ErrorCode::TooManyMatches,
                                "more than " + std::to_string(options_.max_matches) + " matches");
            return;
        }
        for (EdgeId e : options[j]) {
            if (!used_edges.insert(e).second) continue;
            chosen[j] = e;
            choose_edges(j + 1, options, chosen, used_edges);
            used_edges.erase(e);
        }
    }

    const GradGraph& g_;
    const GraphPattern& p_;
    const MatchOptions& options_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
    std::vector<std::vector<NodeId>> candidates_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<std::size_t>> checks_;
    std::vector<NodeId> binding_;
    std::vector<bool> bound_;
    std::set<NodeId> used_;
    std::vector<Match> results_;
};

}  // namespace

void canonicalize(const GradGraph& g, const GraphPattern& p, std::vector<Match>& matches)
{
    if (matches.size() < 2) return;
    const CanonicalIndex index(g);
    std::vector<std::vector<std::size_t>> keys;
    keys.reserve(matches.size());
    for (const auto& m : matches) {
        std::vector<std::size_t> key;
        for (const auto& node : p.nodes) key.push_back(index.rank(m.nodes.at(node.var)));
        for (EdgeId e : m.edges) key.push_back(index.rank(e));
        keys.push_back(std::move(key));
    }
    std::vector<std::size_t> perm(matches.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<Match> sorted;
    sorted.reserve(matches.size());
    for (std::size_t i : perm) sorted.push_back(std::move(matches[i]));
    matches = std::move(sorted);
}

MatchSet match(const GradGraph& g, const GraphPattern& p, const MatchOptions& options)
{
    require_valid(validate_pattern(p));
    MatchSet result;
    result.matches = Backtracker(g, p, options).run();
    canonicalize(g, p, result.matches);
    return result;
}

GradGraph matched_subgraph(const GradGraph& g, const Match& m)
{
    GradGraph out;
    std::map<NodeId, NodeId> mapped;
    std::set<NodeId> bound;
    for (const auto& [_, id] : m.nodes) bound.insert(id);

    for (NodeId id : bound)
        if (g.kind_of(id) == NodeKind::Entity) {
            const auto& node = g.entity(id);
            mapped[id] = out.add_entity_node(node.class_label, node.identifiers);
        }
    for (NodeId id : bound)
        if (g.kind_of(id) == NodeKind::Attribute) {
            const auto& attr = g.attribute(id);
            if (!mapped.count(attr.parent))
                throw GradError(ErrorCode::StructuralViolation, "matched attribute node without its entity node");
            mapped[id] = out.add_attribute(mapped.at(attr.parent), attr.label);
        }
    for (NodeId id : bound)
        if (g.kind_of(id) == NodeKind::Literal) {
            const auto& lit = g.literal(id);
            if (!mapped.count(lit.parent))
                throw GradError(ErrorCode::StructuralViolation, "matched literal node without its attribute node");
            mapped[id] = out.add_literal(mapped.at(lit.parent), lit.value, g.literal_edge(lit.edge).context);
        }
    for (EdgeId e : m.edges) {
        if (g.kind_of(e) != EdgeKind::Entity) continue;
        const auto& edge = g.entity_edge(e);
        out.add_entity_edge(mapped.at(edge.start), mapped.at(edge.end), edge.kind, edge.label, edge.attributes);
    }
    return out;
}

}  // namespace grad
