#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "grad/error.hpp"
#include "grad/value.hpp"

namespace grad {

// Opaque storage tokens. They are assigned monotonically per graph and are
// unrelated to the domain identity of the element (see identity.hpp).
struct NodeId {
    std::uint64_t value = 0;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct EdgeId {
    std::uint64_t value = 0;
    friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

enum class NodeKind { Entity, Attribute, Literal };
enum class EdgeKind { Entity, Attribute, Literal };

enum class EntityEdgeKind { Association, Generalization, Aggregation, Composition };

const char* to_string(EntityEdgeKind kind);
std::optional<EntityEdgeKind> parse_entity_edge_kind(const std::string& text);

/// Generalization, Aggregation and Composition allow one outgoing edge per node.
constexpr bool is_parent_kind(EntityEdgeKind kind) { return kind != EntityEdgeKind::Association; }

using Identifiers = Properties;

struct EntityNode {
    std::string class_label;
    Identifiers identifiers;
};

struct AttributeNode {
    std::string label;
    NodeId parent;
    EdgeId edge;
};

struct LiteralNode {
    Value value;
    NodeId parent;
    EdgeId edge;
};

struct EntityEdge {
    NodeId start;
    NodeId end;
    EntityEdgeKind kind = EntityEdgeKind::Association;
    std::string label;
    Properties attributes;
};

struct AttributeEdge {
    NodeId start;
    NodeId end;
};

struct LiteralEdge {
    NodeId start;
    NodeId end;
    Properties context;
};

/// Induced two-level tree of one entity node.
struct Hypernode {
    NodeId root;
    std::vector<NodeId> attribute_nodes;
    std::vector<NodeId> literal_nodes;
    std::vector<EdgeId> attribute_edges;
    std::vector<EdgeId> literal_edges;

    std::size_t size() const
    {
        return 1 + attribute_nodes.size() + literal_nodes.size() + attribute_edges.size() +
               literal_edges.size();
    }
};

enum class GraphMode { Lax, Strict };

/// Result of copying one graph into another: source handle -> target handle.
struct HandleMap {
    std::map<NodeId, NodeId> nodes;
    std::map<EdgeId, EdgeId> edges;
};

/// In-memory GRAD graph: three node partitions, three edge partitions.
///
/// Structural invariants are enforced on every mutation: edge endpoints
/// exist and have the right partition, attribute and literal nodes have
/// exactly one parent edge, and an entity node has at most one outgoing
/// Generalization, Aggregation and Composition edge each. Domain identity
/// (duplicate keys) is only checked at insert time in Strict mode; in Lax
/// mode it is left to the constraint checker.
///
/// Not internally synchronized: concurrent readers are fine, a writer needs
/// exclusive access.
class GradGraph {
public:
    explicit GradGraph(GraphMode mode = GraphMode::Lax) : mode_(mode) {}

    GraphMode mode() const noexcept { return mode_; }
    void set_mode(GraphMode mode) noexcept { mode_ = mode; }

    NodeId add_entity_node(std::string class_label, Identifiers identifiers);
    EdgeId add_entity_edge(NodeId start, NodeId end, EntityEdgeKind kind, std::string label,
                           Properties attributes = {});
    /// Idempotent per (entity, label).
    NodeId add_attribute(NodeId entity, const std::string& label);
    NodeId add_literal(NodeId attribute, Value value, Properties context = {});

    /// Adds identifier names the node does not have yet. Existing values are
    /// immutable: a differing value for a present name throws
    /// ConflictingIdentifiers.
    void merge_identifiers(NodeId entity, const Identifiers& extra);
    void set_literal_value(NodeId literal, Value value);
    /// Adds attribute names missing on the edge; present names keep their value.
    void merge_edge_attributes(EdgeId edge, const Properties& extra);

    /// Removes a node with cascade. Returns the number of removed nodes and
    /// edges.
    std::size_t remove_node(NodeId node);
    /// Entity edges are removed alone; removing an attribute or literal edge
    /// removes the part it owns.
    std::size_t remove_edge(EdgeId edge);

    bool contains(NodeId node) const;
    bool contains(EdgeId edge) const;
    std::optional<NodeKind> kind_of(NodeId node) const;
    std::optional<EdgeKind> kind_of(EdgeId edge) const;

    const EntityNode& entity(NodeId id) const;
    const AttributeNode& attribute(NodeId id) const;
    const LiteralNode& literal(NodeId id) const;
    const EntityEdge& entity_edge(EdgeId id) const;
    const AttributeEdge& attribute_edge(EdgeId id) const;
    const LiteralEdge& literal_edge(EdgeId id) const;

    const std::map<NodeId, EntityNode>& entity_nodes() const noexcept { return entities_; }
    const std::map<NodeId, AttributeNode>& attribute_nodes() const noexcept { return attributes_; }
    const std::map<NodeId, LiteralNode>& literal_nodes() const noexcept { return literals_; }
    const std::map<EdgeId, EntityEdge>& entity_edges() const noexcept { return entity_edges_; }
    const std::map<EdgeId, AttributeEdge>& attribute_edges() const noexcept { return attribute_edges_; }
    const std::map<EdgeId, LiteralEdge>& literal_edges() const noexcept { return literal_edges_; }

    std::size_t node_count() const noexcept
    {
        return entities_.size() + attributes_.size() + literals_.size();
    }
    std::size_t edge_count() const noexcept
    {
        return entity_edges_.size() + attribute_edges_.size() + literal_edges_.size();
    }
    bool empty() const noexcept { return node_count() == 0; }

    const std::set<EdgeId>& out_edges(NodeId entity) const;
    const std::set<EdgeId>& in_edges(NodeId entity) const;
    /// Attribute nodes of an entity, keyed by label.
    const std::map<std::string, NodeId>& attributes_of(NodeId entity) const;
    std::optional<NodeId> attribute_of(NodeId entity, const std::string& label) const;
    const std::set<NodeId>& literals_of(NodeId attribute) const;
    /// Outgoing edge of the given parent kind, if any.
    std::optional<EdgeId> parent_edge(NodeId entity, EntityEdgeKind kind) const;
    /// End node of the outgoing Composition edge: the owner of a weak entity.
    std::optional<NodeId> composition_parent(NodeId entity) const;

    Hypernode hypernode_of(NodeId entity) const;

    /// Copies every element of `other` into this graph under fresh handles
    /// (disjoint juxtaposition, no merging).
    HandleMap append(const GradGraph& other);

private:
    struct EntityAdjacency {
        std::set<EdgeId> out;
        std::set<EdgeId> in;
        std::map<std::string, NodeId> attributes;
    };

    std::uint64_t next_token() { return ++last_token_; }
    EntityAdjacency& adjacency(NodeId entity);
    const EntityAdjacency& adjacency(NodeId entity) const;
    bool strict_duplicate(const std::string& class_label, const Identifiers& identifiers,
                          std::optional<NodeId> comp_parent, NodeId self) const;
    std::size_t remove_entity_node(NodeId node);
    std::size_t remove_attribute_node(NodeId node);
    std::size_t remove_literal_node(NodeId node);
    void erase_entity_edge(EdgeId edge);

    GraphMode mode_;
    std::uint64_t last_token_ = 0;
    std::map<NodeId, EntityNode> entities_;
    std::map<NodeId, AttributeNode> attributes_;
    std::map<NodeId, LiteralNode> literals_;
    std::map<EdgeId, EntityEdge> entity_edges_;
    std::map<EdgeId, AttributeEdge> attribute_edges_;
    std::map<EdgeId, LiteralEdge> literal_edges_;
    std::map<NodeId, EntityAdjacency> adjacency_;
    std::map<NodeId, std::set<NodeId>> literal_children_;
};

}  // namespace grad
