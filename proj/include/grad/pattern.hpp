#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grad/graph.hpp"

namespace grad {

enum class PredicateTarget {
    Identifier,     // identifier `name` of an entity node
    LiteralValue,   // value stored in a literal node
    EdgeAttribute,  // attribute `name` of an entity edge, or context of a literal edge
    NodeLabel,      // class label of an entity node, label of an attribute node
    EdgeLabel,      // label of an entity edge
};

/// One comparison `target op constant`. Predicates on an element form a
/// conjunction.
struct AtomicPredicate {
    PredicateTarget target = PredicateTarget::NodeLabel;
    std::string name;  // identifier / attribute name; empty for other targets
    CompareOp op = CompareOp::Equal;
    Value constant;

    friend bool operator==(const AtomicPredicate&, const AtomicPredicate&) = default;
};

enum class PatternNodeKind { Entity, Attribute, Literal };

struct PatternNode {
    std::string var;
    PatternNodeKind kind = PatternNodeKind::Entity;
    std::vector<AtomicPredicate> predicates;

    friend bool operator==(const PatternNode&, const PatternNode&) = default;
};

enum class PatternEdgeKind { Entity, Attribute, Literal };

struct PatternEdge {
    std::string start_var;
    std::string end_var;
    PatternEdgeKind kind = PatternEdgeKind::Entity;
    /// Restricts an entity pattern edge to one of the four entity-edge kinds.
    std::optional<EntityEdgeKind> entity_kind;
    std::vector<AtomicPredicate> predicates;
    /// Optional binding name, usable by templates (`${var.attr}`).
    std::string var;

    friend bool operator==(const PatternEdge&, const PatternEdge&) = default;
};

struct GraphPattern {
    std::vector<PatternNode> nodes;
    std::vector<PatternEdge> edges;

    /// Index of the node bound to `var`, if declared.
    std::optional<std::size_t> node_index(const std::string& var) const;
    /// Index of the edge bound to `var`, if declared.
    std::optional<std::size_t> edge_index(const std::string& var) const;

    friend bool operator==(const GraphPattern&, const GraphPattern&) = default;
};

enum class PatternRule {
    DuplicateVariable,
    UnknownVariable,
    IllegalEndpointKinds,
    IllegalPredicateTarget,
    IllegalLabelOperator,
    MissingParent,
    MultipleAttributeParents,
    MultipleLiteralParents,
    WeakNodeWithoutParent,
};

const char* to_string(PatternRule rule);

struct PatternIssue {
    PatternRule rule;
    std::string message;
};

/// Structural validity of a pattern: GRAD element kinds, legal predicate
/// targets, and no attribute or literal node without its parent. Never throws.
std::vector<PatternIssue> validate_pattern(const GraphPattern& p);

/// Additional weak-node check against a data graph: a pattern entity node
/// whose class-label equality selects a class in which every node of `g` is
/// weak (owned through Composition) must reach its owner through a
/// Composition pattern edge.
std::vector<PatternIssue> validate_pattern(const GraphPattern& p, const GradGraph& g);

/// Throws GradError(InvalidPattern) naming the first rule, if any.
void require_valid(const std::vector<PatternIssue>& issues);

/// Evaluates one predicate against a candidate value. A missing value (the
/// element lacks the named property) or an incomparable pair is false.
bool evaluate(const AtomicPredicate& pred, const Value* actual);

}  // namespace grad
