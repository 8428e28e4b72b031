#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "grad/graph.hpp"
#include "grad/pattern.hpp"

namespace grad {

/// One embedding of a pattern: pattern node var -> data node, and the data
/// edge chosen for each pattern edge (same order as GraphPattern::edges).
struct Match {
    std::map<std::string, NodeId> nodes;
    std::vector<EdgeId> edges;

    friend bool operator==(const Match&, const Match&) = default;
    friend auto operator<=>(const Match&, const Match&) = default;
};

/// Matches in canonical order: by the canonical ranks of the bound nodes in
/// pattern declaration order, then of the bound edges.
struct MatchSet {
    std::vector<Match> matches;

    std::size_t size() const noexcept { return matches.size(); }
    bool empty() const noexcept { return matches.empty(); }
};

struct MatchOptions {
    /// 0 = unlimited. Exceeding the limit throws TooManyMatches.
    std::size_t max_matches = 0;
};

/// Injective subgraph matching with predicate pruning. The pattern is a
/// minimum: matched nodes may carry more edges and properties. Parallel
/// entity edges produce one Match per edge choice.
MatchSet match(const GradGraph& g, const GraphPattern& p, const MatchOptions& options = {});

struct BruteForceCaps {
    std::size_t max_pattern_nodes = 8;
    std::size_t max_graph_nodes = 64;
};

/// Reference matcher: walks every injective assignment of pattern nodes to
/// graph nodes in declaration order and keeps those satisfying every
/// condition. Throws CapExceeded beyond the caps.
MatchSet brute_force_match(const GradGraph& g, const GraphPattern& p, const BruteForceCaps& caps = {});

/// The matched subgraph: bound nodes and bound edges copied into a fresh graph.
GradGraph matched_subgraph(const GradGraph& g, const Match& m);

/// Sorts matches into canonical order.
void canonicalize(const GradGraph& g, const GraphPattern& p, std::vector<Match>& matches);

}  // namespace grad
