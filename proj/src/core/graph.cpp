#include "grad/graph.hpp"

#include <algorithm>

namespace grad {

namespace {

std::string node_text(NodeId id) { return "node #" + std::to_string(id.value); }
std::string edge_text(EdgeId id) { return "edge #" + std::to_string(id.value); }

template <typename Map, typename Key>
const typename Map::mapped_type& lookup(const Map& map, Key key, ErrorCode code, const std::string& what)
{
    auto it = map.find(key);
    if (it == map.end()) throw GradError(code, what);
    return it->second;
}

}  // namespace

const char* to_string(EntityEdgeKind kind)
{
    switch (kind) {
    case EntityEdgeKind::Association: return "Association";
    case EntityEdgeKind::Generalization: return "Generalization";
    case EntityEdgeKind::Aggregation: return "Aggregation";
    case EntityEdgeKind::Composition: return "Composition";
    }
    return "?";
}

std::optional<EntityEdgeKind> parse_entity_edge_kind(const std::string& text)
{
    for (auto kind : {EntityEdgeKind::Association, EntityEdgeKind::Generalization,
                      EntityEdgeKind::Aggregation, EntityEdgeKind::Composition}) {
        if (text == to_string(kind)) return kind;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// insertion

bool GradGraph::strict_duplicate(const std::string& class_label, const Identifiers& identifiers,
                                 std::optional<NodeId> comp_parent, NodeId self) const
{
    for (const auto& [id, node] : entities_) {
        if (id == self || node.class_label != class_label || compare(node.identifiers, identifiers) != 0)
            continue;
        if (composition_parent(id) == comp_parent) return true;
    }
    return false;
}

NodeId GradGraph::add_entity_node(std::string class_label, Identifiers identifiers)
{
    if (class_label.empty()) throw GradError(ErrorCode::EmptyLabel, "entity node needs a class label");
    if (identifiers.empty())
        throw GradError(ErrorCode::EmptyIdentifier, "entity node of class " + class_label + " has no identifiers");
    for (const auto& [name, _] : identifiers)
        if (name.empty()) throw GradError(ErrorCode::EmptyIdentifier, "identifier name is empty");
    if (mode_ == GraphMode::Strict && strict_duplicate(class_label, identifiers, std::nullopt, NodeId{}))
        throw GradError(ErrorCode::DuplicateIdentity, "class " + class_label + " already has this identifier set");

    NodeId id{next_token()};
    entities_.emplace(id, EntityNode{std::move(class_label), std::move(identifiers)});
    adjacency_.emplace(id, EntityAdjacency{});
    return id;
}

EdgeId GradGraph::add_entity_edge(NodeId start, NodeId end, EntityEdgeKind kind, std::string label,
                                  Properties attributes)
{
    if (!entities_.count(start)) throw GradError(ErrorCode::UnknownNode, "start " + node_text(start) + " is not an entity node");
    if (!entities_.count(end)) throw GradError(ErrorCode::UnknownNode, "end " + node_text(end) + " is not an entity node");
    if (label.empty()) throw GradError(ErrorCode::EmptyLabel, "entity edge needs a label");
    if (is_parent_kind(kind) && parent_edge(start, kind))
        throw GradError(ErrorCode::DuplicateParentEdge,
                        node_text(start) + " already has an outgoing " + to_string(kind) + " edge");

    if (mode_ == GraphMode::Strict) {
        for (EdgeId e : adjacency(start).out) {
            const auto& other = entity_edges_.at(e);
            if (other.end == end && other.label == label)
                throw GradError(ErrorCode::DuplicateEdgeLabelPair, "an edge labeled " + label + " already links this pair");
        }
        if (kind == EntityEdgeKind::Composition) {
            const auto& node = entities_.at(start);
            if (strict_duplicate(node.class_label, node.identifiers, end, start))
                throw GradError(ErrorCode::DuplicateIdentity, "weak entity key already present under this owner");
        }
    }

    EdgeId id{next_token()};
    entity_edges_.emplace(id, EntityEdge{start, end, kind, std::move(label), std::move(attributes)});
    adjacency(start).out.insert(id);
    adjacency(end).in.insert(id);
    return id;
}

NodeId GradGraph::add_attribute(NodeId entity, const std::string& label)
{
    if (!entities_.count(entity)) throw GradError(ErrorCode::UnknownNode, node_text(entity) + " is not an entity node");
    if (label.empty()) throw GradError(ErrorCode::EmptyLabel, "attribute node needs a label");
    auto& adj = adjacency(entity);
    if (auto it = adj.attributes.find(label); it != adj.attributes.end()) return it->second;

    NodeId node{next_token()};
    EdgeId edge{next_token()};
    attributes_.emplace(node, AttributeNode{label, entity, edge});
    attribute_edges_.emplace(edge, AttributeEdge{entity, node});
    literal_children_.emplace(node, std::set<NodeId>{});
    adj.attributes.emplace(label, node);
    return node;
}

NodeId GradGraph::add_literal(NodeId attribute, Value value, Properties context)
{
    if (!attributes_.count(attribute))
        throw GradError(ErrorCode::UnknownNode, node_text(attribute) + " is not an attribute node");
    for (const auto& [name, v] : context) {
        if (!v.is_scalar())
            throw GradError(ErrorCode::CompositeContextValue, "context value '" + name + "' is composite");
    }
    NodeId node{next_token()};
    EdgeId edge{next_token()};
    literals_.emplace(node, LiteralNode{std::move(value), attribute, edge});
    literal_edges_.emplace(edge, LiteralEdge{attribute, node, std::move(context)});
    literal_children_.at(attribute).insert(node);
    return node;
}

void GradGraph::merge_identifiers(NodeId entity, const Identifiers& extra)
{
    auto it = entities_.find(entity);
    if (it == entities_.end()) throw GradError(ErrorCode::UnknownNode, node_text(entity) + " is not an entity node");
    for (const auto& [name, value] : extra) {
        auto [pos, inserted] = it->second.identifiers.emplace(name, value);
        if (!inserted && pos->second != value)
            throw GradError(ErrorCode::ConflictingIdentifiers,
                            "identifier " + name + " differs: " + pos->second.to_display() + " vs " + value.to_display());
    }
}

void GradGraph::set_literal_value(NodeId literal, Value value)
{
    auto it = literals_.find(literal);
    if (it == literals_.end()) throw GradError(ErrorCode::UnknownNode, node_text(literal) + " is not a literal node");
    it->second.value = std::move(value);
}

void GradGraph::merge_edge_attributes(EdgeId edge, const Properties& extra)
{
    auto it = entity_edges_.find(edge);
    if (it == entity_edges_.end()) throw GradError(ErrorCode::UnknownEdge, edge_text(edge) + " is not an entity edge");
    for (const auto& [name, value] : extra) it->second.attributes.emplace(name, value);
}

// ---------------------------------------------------------------------------
// removal

void GradGraph::erase_entity_edge(EdgeId edge)
{
    auto it = entity_edges_.find(edge);
    adjacency(it->second.start).out.erase(edge);
    adjacency(it->second.end).in.erase(edge);
    entity_edges_.erase(it);
}

std::size_t GradGraph::remove_literal_node(NodeId node)
{
    const auto& lit = literals_.at(node);
    literal_children_.at(lit.parent).erase(node);
    literal_edges_.erase(lit.edge);
    literals_.erase(node);
    return 2;
}

std::size_t GradGraph::remove_attribute_node(NodeId node)
{
    std::size_t count = 0;
    const std::set<NodeId> children = literal_children_.at(node);
    for (NodeId lit : children) count += remove_literal_node(lit);
    const auto& attr = attributes_.at(node);
    adjacency(attr.parent).attributes.erase(attr.label);
    attribute_edges_.erase(attr.edge);
    literal_children_.erase(node);
    attributes_.erase(node);
    return count + 2;
}

std::size_t GradGraph::remove_entity_node(NodeId node)
{
    if (!entities_.count(node)) return 0;
    std::size_t count = 0;

    // weak parts first: every node owned through an incoming Composition edge
    std::vector<NodeId> parts;
    for (EdgeId e : adjacency(node).in) {
        const auto& edge = entity_edges_.at(e);
        if (edge.kind == EntityEdgeKind::Composition && edge.start != node) parts.push_back(edge.start);
    }
    // detach the node itself before recursing so composition cycles terminate
    std::vector<EdgeId> incident(adjacency(node).out.begin(), adjacency(node).out.end());
    incident.insert(incident.end(), adjacency(node).in.begin(), adjacency(node).in.end());
    std::sort(incident.begin(), incident.end());
    incident.erase(std::unique(incident.begin(), incident.end()), incident.end());
    for (EdgeId e : incident) {
        erase_entity_edge(e);
        ++count;
    }
    const auto attrs = adjacency(node).attributes;
    for (const auto& [_, attr] : attrs) count += remove_attribute_node(attr);
    adjacency_.erase(node);
    entities_.erase(node);
    ++count;

    for (NodeId part : parts) count += remove_entity_node(part);
    return count;
}

std::size_t GradGraph::remove_node(NodeId node)
{
    if (entities_.count(node)) return remove_entity_node(node);
    if (attributes_.count(node)) return remove_attribute_node(node);
    if (literals_.count(node)) return remove_literal_node(node);
    throw GradError(ErrorCode::UnknownNode, node_text(node) + " is not in the graph");
}

std::size_t GradGraph::remove_edge(EdgeId edge)
{
    if (entity_edges_.count(edge)) {
        erase_entity_edge(edge);
        return 1;
    }
    if (auto it = attribute_edges_.find(edge); it != attribute_edges_.end())
        return remove_attribute_node(it->second.end);
    if (auto it = literal_edges_.find(edge); it != literal_edges_.end())
        return remove_literal_node(it->second.end);
    throw GradError(ErrorCode::UnknownEdge, edge_text(edge) + " is not in the graph");
}

// ---------------------------------------------------------------------------
// queries

bool GradGraph::contains(NodeId node) const { return kind_of(node).has_value(); }
bool GradGraph::contains(EdgeId edge) const { return kind_of(edge).has_value(); }

std::optional<NodeKind> GradGraph::kind_of(NodeId node) const
{
    if (entities_.count(node)) return NodeKind::Entity;
    if (attributes_.count(node)) return NodeKind::Attribute;
    if (literals_.count(node)) return NodeKind::Literal;
    return std::nullopt;
}

std::optional<EdgeKind> GradGraph::kind_of(EdgeId edge) const
{
    if (entity_edges_.count(edge)) return EdgeKind::Entity;
    if (attribute_edges_.count(edge)) return EdgeKind::Attribute;
    if (literal_edges_.count(edge)) return EdgeKind::Literal;
    return std::nullopt;
}

const EntityNode& GradGraph::entity(NodeId id) const
{
    return lookup(entities_, id, ErrorCode::UnknownNode, node_text(id) + " is not an entity node");
}

const AttributeNode& GradGraph::attribute(NodeId id) const
{
    return lookup(attributes_, id, ErrorCode::UnknownNode, node_text(id) + " is not an attribute node");
}

const LiteralNode& GradGraph::literal(NodeId id) const
{
    return lookup(literals_, id, ErrorCode::UnknownNode, node_text(id) + " is not a literal node");
}

const EntityEdge& GradGraph::entity_edge(EdgeId id) const
{
    return lookup(entity_edges_, id, ErrorCode::UnknownEdge, edge_text(id) + " is not an entity edge");
}

const AttributeEdge& GradGraph::attribute_edge(EdgeId id) const
{
    return lookup(attribute_edges_, id, ErrorCode::UnknownEdge, edge_text(id) + " is not an attribute edge");
}

const LiteralEdge& GradGraph::literal_edge(EdgeId id) const
{
    return lookup(literal_edges_, id, ErrorCode::UnknownEdge, edge_text(id) + " is not a literal edge");
}

GradGraph::EntityAdjacency& GradGraph::adjacency(NodeId entity)
{
    auto it = adjacency_.find(entity);
    if (it == adjacency_.end()) throw GradError(ErrorCode::UnknownNode, node_text(entity) + " is not an entity node");
    return it->second;
}

const GradGraph::EntityAdjacency& GradGraph::adjacency(NodeId entity) const
{
    return lookup(adjacency_, entity, ErrorCode::UnknownNode, node_text(entity) + " is not an entity node");
}

const std::set<EdgeId>& GradGraph::out_edges(NodeId entity) const { return adjacency(entity).out; }
const std::set<EdgeId>& GradGraph::in_edges(NodeId entity) const { return adjacency(entity).in; }

const std::map<std::string, NodeId>& GradGraph::attributes_of(NodeId entity) const
{
    return adjacency(entity).attributes;
}

std::optional<NodeId> GradGraph::attribute_of(NodeId entity, const std::string& label) const
{
    const auto& attrs = adjacency(entity).attributes;
    if (auto it = attrs.find(label); it != attrs.end()) return it->second;
    return std::nullopt;
}

const std::set<NodeId>& GradGraph::literals_of(NodeId attribute) const
{
    return lookup(literal_children_, attribute, ErrorCode::UnknownNode,
                  node_text(attribute) + " is not an attribute node");
}

std::optional<EdgeId> GradGraph::parent_edge(NodeId entity, EntityEdgeKind kind) const
{
    for (EdgeId e : adjacency(entity).out)
        if (entity_edges_.at(e).kind == kind) return e;
    return std::nullopt;
}

std::optional<NodeId> GradGraph::composition_parent(NodeId entity) const
{
    if (auto e = parent_edge(entity, EntityEdgeKind::Composition)) return entity_edges_.at(*e).end;
    return std::nullopt;
}

Hypernode GradGraph::hypernode_of(NodeId entity) const
{
    Hypernode h;
    h.root = entity;
    for (const auto& [_, attr] : attributes_of(entity)) {
        h.attribute_nodes.push_back(attr);
        h.attribute_edges.push_back(attributes_.at(attr).edge);
        for (NodeId lit : literal_children_.at(attr)) {
            h.literal_nodes.push_back(lit);
            h.literal_edges.push_back(literals_.at(lit).edge);
        }
    }
    return h;
}

HandleMap GradGraph::append(const GradGraph& other)
{
    HandleMap map;
    // Strict-mode checks do not apply to a juxtaposition: it may carry
    // duplicates by construction.
    const GraphMode saved = mode_;
    mode_ = GraphMode::Lax;
    for (const auto& [id, node] : other.entities_) map.nodes[id] = add_entity_node(node.class_label, node.identifiers);
    for (const auto& [id, attr] : other.attributes_) {
        NodeId copy = add_attribute(map.nodes.at(attr.parent), attr.label);
        map.nodes[id] = copy;
        map.edges[attr.edge] = attributes_.at(copy).edge;
    }
    for (const auto& [id, lit] : other.literals_) {
        NodeId copy = add_literal(map.nodes.at(lit.parent), lit.value, other.literal_edges_.at(lit.edge).context);
        map.nodes[id] = copy;
        map.edges[lit.edge] = literals_.at(copy).edge;
    }
    for (const auto& [id, edge] : other.entity_edges_) {
        map.edges[id] = add_entity_edge(map.nodes.at(edge.start), map.nodes.at(edge.end), edge.kind, edge.label,
                                        edge.attributes);
    }
    mode_ = saved;
    return map;
}

}  // namespace grad
