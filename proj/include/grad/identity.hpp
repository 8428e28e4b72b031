#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "grad/graph.hpp"

namespace grad {

/// Domain identity of an entity node, entity edge or attribute node.
///
///   strong entity   <C, ID>
///   weak entity     <C, key(owner), ID>
///   entity edge     <label, key(start), key(end)>
///   attribute node  <label, key(entity)>
///
/// Keys compare lexicographically over (kind, label, sub-keys, identifiers).
struct IdentityKey {
    enum class Kind { Entity, EntityEdge, Attribute };

    Kind kind = Kind::Entity;
    std::string label;
    std::vector<IdentityKey> parts;
    Identifiers identifiers;

    std::string to_string() const;

    friend int compare(const IdentityKey& a, const IdentityKey& b);
    friend bool operator==(const IdentityKey& a, const IdentityKey& b) { return compare(a, b) == 0; }
    friend bool operator<(const IdentityKey& a, const IdentityKey& b) { return compare(a, b) < 0; }
};

/// Throws UnknownNode, UnsupportedElement for literal nodes, and
/// CompositionCycle when the owner chain of a weak entity loops.
IdentityKey identity_key(const GradGraph& g, NodeId node);
IdentityKey identity_key(const GradGraph& g, EdgeId entity_edge);

/// Like identity_key but never throws on a composition cycle: the chain is
/// cut where it revisits a node. Used for ordering and diagnostics.
IdentityKey ordering_key(const GradGraph& g, NodeId node);
IdentityKey ordering_key(const GradGraph& g, EdgeId entity_edge);

/// Deterministic total order over every node and edge of one graph, based on
/// domain content rather than handles. Handles only break ties between
/// elements that are indistinguishable by content.
class CanonicalIndex {
public:
    explicit CanonicalIndex(const GradGraph& g);

    std::size_t rank(NodeId node) const { return node_rank_.at(node); }
    std::size_t rank(EdgeId edge) const { return edge_rank_.at(edge); }

    const std::vector<NodeId>& entities() const noexcept { return entities_; }
    const std::vector<NodeId>& attributes() const noexcept { return attributes_; }
    const std::vector<NodeId>& literals() const noexcept { return literals_; }
    const std::vector<EdgeId>& entity_edges() const noexcept { return entity_edges_; }
    const std::vector<EdgeId>& attribute_edges() const noexcept { return attribute_edges_; }
    const std::vector<EdgeId>& literal_edges() const noexcept { return literal_edges_; }

    const IdentityKey& key(NodeId entity_or_attribute) const { return keys_.at(entity_or_attribute); }

private:
    std::vector<NodeId> entities_;
    std::vector<NodeId> attributes_;
    std::vector<NodeId> literals_;
    std::vector<EdgeId> entity_edges_;
    std::vector<EdgeId> attribute_edges_;
    std::vector<EdgeId> literal_edges_;
    std::map<NodeId, std::size_t> node_rank_;
    std::map<EdgeId, std::size_t> edge_rank_;
    std::map<NodeId, IdentityKey> keys_;
};

/// Classes and attribute labels present in a graph.
struct ClassRegistry {
    std::map<std::string, std::set<NodeId>> classes;
    std::set<std::string> attribute_labels;
};

ClassRegistry class_registry(const GradGraph& g);

}  // namespace grad
