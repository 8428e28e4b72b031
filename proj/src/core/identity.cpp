#include "grad/identity.hpp"

#include <algorithm>
#include <tuple>

namespace grad {

namespace {

template <typename T>
int three_way(const T& a, const T& b)
{
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

std::string render_identifiers(const Identifiers& ids)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [name, value] : ids) {
        if (!first) out += ",";
        first = false;
        out += name + "=" + value.to_display();
    }
    return out + "}";
}

// Typed rendering used only for content signatures.
std::string typed(const Value& v)
{
    static const char* tags[] = {"b", "i", "f", "s", "c"};
    return std::string(tags[static_cast<int>(v.type())]) + ":" + v.to_display();
}

std::string typed(const Properties& props)
{
    std::string out;
    for (const auto& [name, value] : props) out += name + "=" + typed(value) + ";";
    return out;
}

IdentityKey entity_key(const GradGraph& g, NodeId node, std::vector<NodeId>& chain, bool throw_on_cycle)
{
    const auto& entity = g.entity(node);
    IdentityKey key;
    key.kind = IdentityKey::Kind::Entity;
    key.label = entity.class_label;
    key.identifiers = entity.identifiers;

    if (auto owner = g.composition_parent(node)) {
        if (std::find(chain.begin(), chain.end(), *owner) != chain.end() || *owner == node) {
            if (throw_on_cycle)
                throw GradError(ErrorCode::CompositionCycle,
                                "composition chain of " + entity.class_label + render_identifiers(entity.identifiers) +
                                    " loops");
            return key;
        }
        chain.push_back(node);
        key.parts.push_back(entity_key(g, *owner, chain, throw_on_cycle));
        chain.pop_back();
    }
    return key;
}

IdentityKey node_key(const GradGraph& g, NodeId node, bool throw_on_cycle)
{
    auto kind = g.kind_of(node);
    if (!kind) throw GradError(ErrorCode::UnknownNode, "node #" + std::to_string(node.value) + " is not in the graph");
    std::vector<NodeId> chain;
    switch (*kind) {
    case NodeKind::Entity: return entity_key(g, node, chain, throw_on_cycle);
    case NodeKind::Attribute: {
        const auto& attr = g.attribute(node);
        IdentityKey key;
        key.kind = IdentityKey::Kind::Attribute;
        key.label = attr.label;
        key.parts.push_back(entity_key(g, attr.parent, chain, throw_on_cycle));
        return key;
    }
    case NodeKind::Literal: break;
    }
    throw GradError(ErrorCode::UnsupportedElement, "literal nodes have no global identity key");
}

IdentityKey edge_key(const GradGraph& g, EdgeId edge, bool throw_on_cycle)
{
    const auto& e = g.entity_edge(edge);
    IdentityKey key;
    key.kind = IdentityKey::Kind::EntityEdge;
    key.label = e.label;
    key.parts.push_back(node_key(g, e.start, throw_on_cycle));
    key.parts.push_back(node_key(g, e.end, throw_on_cycle));
    return key;
}

}  // namespace

int compare(const IdentityKey& a, const IdentityKey& b)
{
    if (int c = three_way(a.kind, b.kind)) return c;
    if (int c = three_way(a.label, b.label)) return c;
    for (std::size_t i = 0; i < std::min(a.parts.size(), b.parts.size()); ++i)
        if (int c = compare(a.parts[i], b.parts[i])) return c;
    if (int c = three_way(a.parts.size(), b.parts.size())) return c;
    return compare(a.identifiers, b.identifiers);
}

std::string IdentityKey::to_string() const
{
    std::string out = "<" + label;
    for (const auto& part : parts) out += "," + part.to_string();
    if (kind == Kind::Entity) out += "," + render_identifiers(identifiers);
    return out + ">";
}

IdentityKey identity_key(const GradGraph& g, NodeId node) { return node_key(g, node, true); }
IdentityKey identity_key(const GradGraph& g, EdgeId entity_edge) { return edge_key(g, entity_edge, true); }
IdentityKey ordering_key(const GradGraph& g, NodeId node) { return node_key(g, node, false); }
IdentityKey ordering_key(const GradGraph& g, EdgeId entity_edge) { return edge_key(g, entity_edge, false); }

CanonicalIndex::CanonicalIndex(const GradGraph& g)
{
    for (const auto& [id, _] : g.entity_nodes()) keys_.emplace(id, ordering_key(g, id));

    // Content signature: hypernode contents plus incident edges described by
    // the neighbours' keys. Separates entity nodes that share a key.
    std::map<NodeId, std::string> signature;
    for (const auto& [id, _] : g.entity_nodes()) {
        std::vector<std::string> parts;
        for (const auto& [label, attr] : g.attributes_of(id)) {
            std::vector<std::string> lits;
            for (NodeId lit : g.literals_of(attr)) {
                const auto& node = g.literal(lit);
                lits.push_back(typed(g.literal_edge(node.edge).context) + "|" + typed(node.value));
            }
            std::sort(lits.begin(), lits.end());
            std::string s = "A:" + label + "[";
            for (const auto& l : lits) s += l + "/";
            parts.push_back(s + "]");
        }
        for (EdgeId e : g.out_edges(id)) {
            const auto& edge = g.entity_edge(e);
            parts.push_back(std::string("O:") + edge.label + ":" + to_string(edge.kind) + ":" + typed(edge.attributes) +
                            ":" + keys_.at(edge.end).to_string());
        }
        for (EdgeId e : g.in_edges(id)) {
            const auto& edge = g.entity_edge(e);
            parts.push_back(std::string("I:") + edge.label + ":" + to_string(edge.kind) + ":" + typed(edge.attributes) +
                            ":" + keys_.at(edge.start).to_string());
        }
        std::sort(parts.begin(), parts.end());
        std::string s;
        for (const auto& p : parts) s += p + "\n";
        signature.emplace(id, std::move(s));
    }

    for (const auto& [id, _] : g.entity_nodes()) entities_.push_back(id);
    std::sort(entities_.begin(), entities_.end(), [&](NodeId a, NodeId b) {
        if (int c = compare(keys_.at(a), keys_.at(b))) return c < 0;
        if (int c = three_way(signature.at(a), signature.at(b))) return c < 0;
        return a < b;
    });
    for (std::size_t i = 0; i < entities_.size(); ++i) node_rank_[entities_[i]] = i;

    for (const auto& [id, _] : g.attribute_nodes()) attributes_.push_back(id);
    std::sort(attributes_.begin(), attributes_.end(), [&](NodeId a, NodeId b) {
        const auto& x = g.attribute(a);
        const auto& y = g.attribute(b);
        return std::tie(node_rank_.at(x.parent), x.label, a) < std::tie(node_rank_.at(y.parent), y.label, b);
    });
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        node_rank_[attributes_[i]] = i;
        keys_.emplace(attributes_[i], ordering_key(g, attributes_[i]));
    }

    for (const auto& [id, _] : g.literal_nodes()) literals_.push_back(id);
    std::sort(literals_.begin(), literals_.end(), [&](NodeId a, NodeId b) {
        const auto& x = g.literal(a);
        const auto& y = g.literal(b);
        if (int c = three_way(node_rank_.at(x.parent), node_rank_.at(y.parent))) return c < 0;
        if (int c = compare(g.literal_edge(x.edge).context, g.literal_edge(y.edge).context)) return c < 0;
        if (int c = compare(x.value, y.value)) return c < 0;
        return a < b;
    });
    for (std::size_t i = 0; i < literals_.size(); ++i) node_rank_[literals_[i]] = i;

    for (const auto& [id, _] : g.entity_edges()) entity_edges_.push_back(id);
    std::sort(entity_edges_.begin(), entity_edges_.end(), [&](EdgeId a, EdgeId b) {
        const auto& x = g.entity_edge(a);
        const auto& y = g.entity_edge(b);
        if (int c = three_way(node_rank_.at(x.start), node_rank_.at(y.start))) return c < 0;
        if (int c = three_way(node_rank_.at(x.end), node_rank_.at(y.end))) return c < 0;
        if (int c = three_way(x.label, y.label)) return c < 0;
        if (int c = three_way(x.kind, y.kind)) return c < 0;
        if (int c = compare(x.attributes, y.attributes)) return c < 0;
        return a < b;
    });
    for (std::size_t i = 0; i < entity_edges_.size(); ++i) edge_rank_[entity_edges_[i]] = i;

    for (NodeId attr : attributes_) attribute_edges_.push_back(g.attribute(attr).edge);
    for (std::size_t i = 0; i < attribute_edges_.size(); ++i) edge_rank_[attribute_edges_[i]] = i;
    for (NodeId lit : literals_) literal_edges_.push_back(g.literal(lit).edge);
    for (std::size_t i = 0; i < literal_edges_.size(); ++i) edge_rank_[literal_edges_[i]] = i;
}

ClassRegistry class_registry(const GradGraph& g)
{
    ClassRegistry reg;
    for (const auto& [id, node] : g.entity_nodes()) reg.classes[node.class_label].insert(id);
    for (const auto& [_, attr] : g.attribute_nodes()) reg.attribute_labels.insert(attr.label);
    return reg;
}

}  // namespace grad
