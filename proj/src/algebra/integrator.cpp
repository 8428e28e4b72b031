#include <algorithm>

#include "grad/algebra.hpp"
#include "grad/identity.hpp"

namespace grad {

namespace {

std::string render(const Properties& props)
{
    std::string out = "{";
    for (auto it = props.begin(); it != props.end(); ++it) {
        if (it != props.begin()) out += ",";
        out += it->first + "=" + it->second.to_display();
    }
    return out + "}";
}

/// Length of the owner chain; nodes on a composition cycle sort last.
std::size_t owner_depth(const GradGraph& g, NodeId id)
{
    std::size_t depth = 0;
    std::set<NodeId> seen{id};
    while (auto owner = g.composition_parent(id)) {
        if (!seen.insert(*owner).second) return g.entity_nodes().size();
        id = *owner;
        ++depth;
    }
    return depth;
}

}  // namespace

GraphIntegrator::GraphIntegrator(GradGraph& target) : target_(target)
{
    for (const auto& [id, node] : target_.entity_nodes())
        if (!target_.composition_parent(id)) strong_.emplace(std::make_pair(node.class_label, node.identifiers), id);
}

std::optional<NodeId> GraphIntegrator::weak_partner(const EntityNode& incoming, NodeId target_owner) const
{
    for (EdgeId e : target_.in_edges(target_owner)) {
        const auto& edge = target_.entity_edge(e);
        if (edge.kind != EntityEdgeKind::Composition) continue;
        const auto& part = target_.entity(edge.start);
        if (part.class_label == incoming.class_label && compare(part.identifiers, incoming.identifiers) == 0)
            return edge.start;
    }
    return std::nullopt;
}

HandleMap GraphIntegrator::fold(const GradGraph& source)
{
    return fold(source, [this](const EntityNode& incoming) -> std::optional<NodeId> {
        auto it = strong_.find({incoming.class_label, incoming.identifiers});
        if (it == strong_.end()) return std::nullopt;
        return it->second;
    });
}

HandleMap GraphIntegrator::fold(const GradGraph& source, const Partner& partner)
{
    const CanonicalIndex index(source);
    HandleMap map;

    std::vector<NodeId> order = index.entities();
    std::map<NodeId, std::size_t> depth_of;
    for (NodeId id : order) depth_of[id] = owner_depth(source, id);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return depth_of[a] < depth_of[b]; });

    for (NodeId s : order) {
        const auto& node = source.entity(s);
        std::optional<NodeId> t;
        const auto owner = source.composition_parent(s);
        if (owner) {
            auto it = map.nodes.find(*owner);
            if (it != map.nodes.end()) t = weak_partner(node, it->second);
        } else {
            t = partner(node);
        }

        if (t) {
            const auto before = target_.entity(*t);
            try {
                target_.merge_identifiers(*t, node.identifiers);
            } catch (const GradError&) {
                throw GradError(ErrorCode::ConflictingIdentifiers,
                                ordering_key(target_, *t).to_string() + " and " + ordering_key(source, s).to_string() +
                                    " disagree on a shared identifier");
            }
            const auto& after = target_.entity(*t);
            if (!target_.composition_parent(*t) && compare(before.identifiers, after.identifiers) != 0) {
                auto it = strong_.find({before.class_label, before.identifiers});
                if (it != strong_.end() && it->second == *t) strong_.erase(it);
                strong_.emplace(std::make_pair(after.class_label, after.identifiers), *t);
            }
        } else {
            t = target_.add_entity_node(node.class_label, node.identifiers);
            if (!owner) strong_.emplace(std::make_pair(node.class_label, node.identifiers), *t);
        }
        map.nodes[s] = *t;
    }

    for (NodeId a : index.attributes()) {
        const auto& attr = source.attribute(a);
        const NodeId t = target_.add_attribute(map.nodes.at(attr.parent), attr.label);
        map.nodes[a] = t;
        map.edges[attr.edge] = target_.attribute(t).edge;
    }

    for (NodeId l : index.literals()) {
        const auto& lit = source.literal(l);
        const auto& context = source.literal_edge(lit.edge).context;
        const NodeId attr = map.nodes.at(lit.parent);
        std::optional<NodeId> same;
        bool conflict = false;
        for (NodeId existing : target_.literals_of(attr)) {
            const auto& other = target_.literal(existing);
            if (compare(target_.literal_edge(other.edge).context, context) != 0) continue;
            if (other.value == lit.value) {
                same = existing;
                break;
            }
            conflict = true;
        }
        if (!same) {
            if (conflict)
                warnings_.push_back(ordering_key(target_, attr).to_string() + " keeps several literals with context " +
                                    render(context));
            same = target_.add_literal(attr, lit.value, context);
        }
        map.nodes[l] = *same;
        map.edges[lit.edge] = target_.literal(*same).edge;
    }

    for (EdgeId e : index.entity_edges()) {
        const auto& edge = source.entity_edge(e);
        const NodeId s = map.nodes.at(edge.start);
        const NodeId d = map.nodes.at(edge.end);
        std::optional<EdgeId> same;
        for (EdgeId existing : target_.out_edges(s)) {
            const auto& other = target_.entity_edge(existing);
            if (other.end == d && other.label == edge.label) {
                same = existing;
                break;
            }
        }
        if (same) {
            target_.merge_edge_attributes(*same, edge.attributes);
        } else {
            if (is_parent_kind(edge.kind) && target_.parent_edge(s, edge.kind))
                throw GradError(ErrorCode::ConflictingParentEdges,
                                ordering_key(target_, s).to_string() + " would get a second outgoing " +
                                    to_string(edge.kind) + " edge");
            same = target_.add_entity_edge(s, d, edge.kind, edge.label, edge.attributes);
        }
        map.edges[e] = *same;
    }
    return map;
}

}  // namespace grad
