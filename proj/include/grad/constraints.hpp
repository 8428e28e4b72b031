#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "grad/graph.hpp"
#include "grad/pattern.hpp"

namespace grad {

enum class Rule {
    DanglingReference,
    ParentEdgeCardinality,
    CompositionCycle,
    HierarchyCycle,
    DuplicateEntityIdentity,
    DuplicateEdgeIdentity,
    DuplicateAttributeIdentity,
    EdgeLabelClassConflict,
    AssertionFailed,
    MultiplicityFailed,
    DuplicateLiteralContext,
};

const char* to_string(Rule rule);

enum class Severity { Error, Warning };

const char* to_string(Severity severity);

struct Violation {
    Rule rule;
    Severity severity = Severity::Error;
    /// Identity keys (or `#handle` where no key exists) of the elements involved.
    std::vector<std::string> elements;
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// A pattern every governed entity node must embed into. The governed nodes
/// are those whose class equals the `=` label predicate of an anchor variable
/// (every entity node when the anchor has none).
struct Assertion {
    std::string name;
    GraphPattern pattern;
    std::vector<std::string> anchor_vars;
};

/// Inclusive edge-count range; `max == nullopt` is unbounded.
struct CountRange {
    std::size_t min = 0;
    std::optional<std::size_t> max;

    bool contains(std::size_t n) const { return n >= min && (!max || n <= *max); }
    std::string to_string() const;
};

/// Edge-count bounds between two classes through one label. `forward`
/// bounds each source_class node's outgoing edges, `backward` each
/// target_class node's incoming ones.
struct Multiplicity {
    std::string source_class;
    std::string edge_label;
    std::string target_class;
    CountRange forward;
    CountRange backward;
    /// Declared kind of the constrained edges, when known.
    std::optional<EntityEdgeKind> edge_kind;

    std::string to_string() const;
};

/// Throws InvalidMultiplicity for min > max or for a forward maximum above
/// one on a Generalization, Aggregation or Composition edge.
void check_well_formed(const Multiplicity& m);
void check_well_formed(const Assertion& a);

struct IntegrityOptions {
    /// Edge label <-> (start class, end class) uniqueness across the whole
    /// graph instead of per start node.
    bool global_edge_labels = false;
};

/// Dangling references, single-parent law, parent-edge cardinality. A graph
/// built through GradGraph always passes; used to verify operator closure.
std::vector<Violation> check_structure(const GradGraph& g);

std::vector<Violation> check_entity_integrity(const GradGraph& g, const IntegrityOptions& options = {});
std::vector<Violation> check_assertion(const GradGraph& g, const Assertion& a);
std::vector<Violation> check_multiplicity(const GradGraph& g, const Multiplicity& m);

struct ValidationReport {
    std::vector<Violation> violations;
    std::size_t errors = 0;
    std::size_t warnings = 0;

    bool ok() const noexcept { return errors == 0; }
};

ValidationReport validate(const GradGraph& g, const std::vector<Assertion>& assertions = {},
                          const std::vector<Multiplicity>& multiplicities = {},
                          const IntegrityOptions& options = {});

}  // namespace grad
