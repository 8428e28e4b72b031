#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grad/graph.hpp"
#include "grad/matcher.hpp"
#include "grad/pattern.hpp"

namespace grad {

/// Ordered list of graphs. Operators keep the order they define (match
/// order for selection, pair order for products and joins); sort_canonical
/// reorders by the sorted entity identity keys of each member.
struct GraphCollection {
    std::vector<GradGraph> graphs;

    std::size_t size() const noexcept { return graphs.size(); }
    bool empty() const noexcept { return graphs.empty(); }
};

void sort_canonical(GraphCollection& c);

// ---------------------------------------------------------------------------
// Templates

/// A constant, or a reference to something bound by the paired pattern:
///
///   ${v}        entity var: class label; attribute var: label;
///               literal var: value; entity-edge var: label
///   ${v.name}   entity var: identifier `name`; edge var: attribute or
///               context `name`; literal var: context `name` of its edge
struct TemplateValue {
    Value constant;
    std::string var;
    std::string field;

    bool is_reference() const noexcept { return !var.empty(); }
    static TemplateValue of(Value v) { return {std::move(v), {}, {}}; }
    static TemplateValue ref(std::string var, std::string field = {}) { return {{}, std::move(var), std::move(field)}; }

    friend bool operator==(const TemplateValue&, const TemplateValue&) = default;
};

using TemplateProperties = std::vector<std::pair<std::string, TemplateValue>>;

struct TemplateEntity {
    std::string var;
    TemplateValue class_label;
    TemplateProperties identifiers;

    friend bool operator==(const TemplateEntity&, const TemplateEntity&) = default;
};

struct TemplateAttribute {
    std::string var;
    std::string entity_var;
    TemplateValue label;

    friend bool operator==(const TemplateAttribute&, const TemplateAttribute&) = default;
};

struct TemplateLiteral {
    std::string attribute_var;
    TemplateValue value;
    TemplateProperties context;

    friend bool operator==(const TemplateLiteral&, const TemplateLiteral&) = default;
};

struct TemplateEdge {
    std::string start_var;
    std::string end_var;
    EntityEdgeKind kind = EntityEdgeKind::Association;
    TemplateValue label;
    TemplateProperties attributes;
    /// Orders the two endpoints by identity key before creating the edge, so
    /// (a, b) and (b, a) instantiate the same edge.
    bool symmetric = false;

    friend bool operator==(const TemplateEdge&, const TemplateEdge&) = default;
};

/// GRAD-shaped fragment instantiated once per match.
struct GraphTemplate {
    std::vector<TemplateEntity> entities;
    std::vector<TemplateAttribute> attributes;
    std::vector<TemplateLiteral> literals;
    std::vector<TemplateEdge> edges;

    friend bool operator==(const GraphTemplate&, const GraphTemplate&) = default;
};

/// Throws UnboundTemplateVariable for references the pattern does not bind
/// and TemplateNotGradCompliant for fragments that cannot form a GRAD graph.
void check_template(const GraphTemplate& t, const GraphPattern& p);

/// One template instance for one match.
GradGraph instantiate(const GraphTemplate& t, const GraphPattern& p, const GradGraph& g, const Match& m);

// ---------------------------------------------------------------------------
// Join predicates

/// Two strong entity nodes of `class_label` correspond when they agree on
/// every identifier in `match_on`.
struct MergeRule {
    std::string class_label;
    std::vector<std::string> match_on;

    friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

struct JoinPredicate {
    std::vector<MergeRule> rules;

    friend bool operator==(const JoinPredicate&, const JoinPredicate&) = default;
};

/// Throws InvalidJoinPredicate.
void check_well_formed(const JoinPredicate& pr);

bool satisfies(const JoinPredicate& pr, const EntityNode& a, const EntityNode& b);

// ---------------------------------------------------------------------------
// Integration

/// Folds source graphs into a target, merging corresponding elements:
/// entity nodes through a partner choice (identifier maps are unioned),
/// attribute nodes by label, literal nodes on equal context and value,
/// entity edges by (label, start, end). Weak entity nodes merge only when
/// their owners merged and class and identifiers agree.
class GraphIntegrator {
public:
    /// Picks the target node a strong source entity node merges into.
    using Partner = std::function<std::optional<NodeId>(const EntityNode& incoming)>;

    explicit GraphIntegrator(GradGraph& target);

    /// Merges on equal identity key, including nodes added by earlier folds.
    HandleMap fold(const GradGraph& source);
    HandleMap fold(const GradGraph& source, const Partner& partner);

    /// Context-equal, value-different literals kept side by side.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    std::optional<NodeId> weak_partner(const EntityNode& incoming, NodeId target_owner) const;

    GradGraph& target_;
    std::map<std::pair<std::string, Identifiers>, NodeId> strong_;
    std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// Operators. All are pure: inputs are never modified, outputs are fresh.

/// One matched subgraph per match, in match order. The pattern is checked
/// against `g` (including the weak-owner rule).
GraphCollection selection(const GradGraph& g, const GraphPattern& p, const MatchOptions& options = {});

GraphCollection cartesian_product(const GraphCollection& s1, const GraphCollection& s2);

/// Instantiates `t` for every match and merges the instances by identity key.
GradGraph composition(const GradGraph& g, const GraphPattern& p, const GraphTemplate& t,
                      const MatchOptions& options = {});

/// Disjoint juxtaposition: elements sharing an identity key both survive.
GradGraph graph_union(const GradGraph& g, const GradGraph& h);

/// Removes from `g` every exact copy of a connected component of `h`, with
/// cascade.
GradGraph difference(const GradGraph& g, const GradGraph& h);

/// Exact pattern for one graph: equality on every label, identifier,
/// attribute, literal value and context. Used by difference.
GraphPattern exact_pattern(const GradGraph& h);

/// Pairs of the product that hold at least one corresponding entity pair,
/// merged. `warnings` collects side-by-side literal conflicts.
GraphCollection join(const GraphCollection& s1, const GraphCollection& s2, const JoinPredicate& pr,
                     std::vector<std::string>* warnings = nullptr);

}  // namespace grad
