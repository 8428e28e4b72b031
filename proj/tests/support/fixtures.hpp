#pragma once

// Shared fixtures: the MovieLens subgraph built by hand, the patterns and
// constraints written in code (independent of the text formats), and
// seeded generators for property tests.

#include <filesystem>
#include <random>
#include <string>

#include "grad/algebra.hpp"
#include "grad/constraints.hpp"
#include "grad/graph.hpp"
#include "grad/matcher.hpp"
#include "grad/pattern.hpp"

namespace grad::testing {

/// Movie v1 (Star Trek) filmed in UTAH (v2, part of USA v3), directed by
/// v4, with actors v5 (ranking 1) and v6, and an Audience rating of 8.5.
struct MovieLens {
    GradGraph g;
    NodeId v1, v2, v3, v4, v5, v6;
    NodeId rating, audience;
    EdgeId e12, e14, e15, e16, e23, e1r, erv;
};

MovieLens movielens();

/// MovieLens plus a second movie (Into Darkness) with the same two actors.
GradGraph two_movies();

GraphPattern movie_assertion_pattern();
Assertion movie_assertion();
Multiplicity movies_need_actors();
GraphPattern top_movies_pattern();
GraphPattern coactor_pattern();
GraphTemplate coactor_template();

/// Template that recreates every entity, attribute and literal a pattern
/// binds (class, name and num identifiers). Entity edges are labeled with the
/// end node's class, so the output passes entity integrity.
GraphTemplate copy_template(const GraphPattern& p);

AtomicPredicate label_is(const std::string& label);
AtomicPredicate edge_label_is(const std::string& label);

std::filesystem::path data_dir();

/// Content-based canonical form; equal iff the graphs are equal up to handles.
std::string canonical(const GradGraph& g);

using Rng = std::mt19937_64;

struct GraphShape {
    std::size_t max_entities = 10;
    std::size_t max_attributes = 3;
    std::size_t max_nodes = 64;
    /// Identifier values are drawn from [0, id_range); small ranges give duplicates.
    int id_range = 6;
    /// Every entity gets a distinct identifier, so no two nodes share a key.
    bool unique_keys = false;
    /// Prefix for text identifiers; distinct prefixes give identity-disjoint graphs.
    std::string key_prefix = "k";
    bool compositions = true;
    /// Lets two edges with one label join the same ordered node pair.
    bool parallel_edges = true;
    bool edge_attributes = true;
    /// Association labels name their end class (R_A, S_B, ...), so one
    /// label never reaches two classes.
    bool consistent_labels = false;
};

/// A random graph that passes entity integrity with zero errors.
GradGraph random_valid_graph(Rng& rng, const std::string& key_prefix = "k");

GradGraph random_graph(Rng& rng, const GraphShape& shape = {});

/// A valid pattern of at most `max_nodes` nodes. Predicates draw their
/// constants from `g` often enough that matches are common.
GraphPattern random_pattern(Rng& rng, const GradGraph& g, std::size_t max_nodes = 5);

/// Binding sets as sorted vectors, for set comparison.
std::vector<Match> sorted(std::vector<Match> matches);

}  // namespace grad::testing
