#include <json.hpp>
#include <map>

#include "grad/identity.hpp"
#include "grad/io.hpp"

namespace grad {

namespace {

nlohmann::ordered_json value_json(const Value& v)
{
    switch (v.type()) {
    case Value::Type::Boolean: return v.as_bool();
    case Value::Type::Integer: return v.as_int();
    case Value::Type::Decimal: return v.as_double();
    case Value::Type::Text: return v.as_string();
    case Value::Type::Composite: {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& x : v.as_composite()) arr.push_back(value_json(x));
        return arr;
    }
    }
    return nullptr;
}

nlohmann::ordered_json properties_json(const Properties& props)
{
    auto obj = nlohmann::ordered_json::object();
    for (const auto& [name, value] : props) obj[name] = value_json(value);
    return obj;
}

std::string dot_quote(const std::string& text)
{
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_json(const GradGraph& g)
{
    const CanonicalIndex index(g);
    std::map<NodeId, std::string> nid;
    for (const auto* group : {&index.entities(), &index.attributes(), &index.literals()})
        for (NodeId id : *group) nid.emplace(id, "n" + std::to_string(nid.size() + 1));

    nlohmann::ordered_json doc;
    doc["format"] = "grad/1";
    doc["mode"] = g.mode() == GraphMode::Strict ? "strict" : "lax";
    auto entities = nlohmann::ordered_json::array();
    for (NodeId id : index.entities()) {
        const auto& node = g.entity(id);
        nlohmann::ordered_json e;
        e["id"] = nid.at(id);
        e["class"] = node.class_label;
        e["key"] = ordering_key(g, id).to_string();
        e["identifiers"] = properties_json(node.identifiers);
        auto attrs = nlohmann::ordered_json::array();
        for (const auto& [label, attr] : g.attributes_of(id)) {
            nlohmann::ordered_json a;
            a["id"] = nid.at(attr);
            a["label"] = label;
            auto lits = nlohmann::ordered_json::array();
            std::vector<NodeId> ordered(g.literals_of(attr).begin(), g.literals_of(attr).end());
            std::sort(ordered.begin(), ordered.end(), [&](NodeId x, NodeId y) { return index.rank(x) < index.rank(y); });
            for (NodeId lit : ordered) {
                nlohmann::ordered_json l;
                l["id"] = nid.at(lit);
                l["value"] = value_json(g.literal(lit).value);
                l["context"] = properties_json(g.literal_edge(g.literal(lit).edge).context);
                lits.push_back(std::move(l));
            }
            a["literals"] = std::move(lits);
            attrs.push_back(std::move(a));
        }
        e["attributes"] = std::move(attrs);
        entities.push_back(std::move(e));
    }
    doc["entities"] = std::move(entities);

    auto edges = nlohmann::ordered_json::array();
    for (EdgeId id : index.entity_edges()) {
        const auto& edge = g.entity_edge(id);
        nlohmann::ordered_json e;
        e["start"] = nid.at(edge.start);
        e["end"] = nid.at(edge.end);
        e["kind"] = to_string(edge.kind);
        e["label"] = edge.label;
        e["attributes"] = properties_json(edge.attributes);
        edges.push_back(std::move(e));
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

std::string to_dot(const GradGraph& g)
{
    const CanonicalIndex index(g);
    std::map<NodeId, std::string> nid;
    for (const auto* group : {&index.entities(), &index.attributes(), &index.literals()})
        for (NodeId id : *group) nid.emplace(id, "n" + std::to_string(nid.size() + 1));

    std::string out = "digraph grad {\n";
    for (NodeId id : index.entities()) {
        const auto& node = g.entity(id);
        std::string label = node.class_label;
        for (const auto& [name, value] : node.identifiers) label += "\n" + name + "=" + value.to_display();
        out += "  " + nid.at(id) + " [shape=box, label=" + dot_quote(label) + "];\n";
    }
    for (NodeId id : index.attributes())
        out += "  " + nid.at(id) + " [shape=ellipse, label=" + dot_quote(g.attribute(id).label) + "];\n";
    for (NodeId id : index.literals())
        out += "  " + nid.at(id) + " [shape=plaintext, label=" + dot_quote(g.literal(id).value.to_display()) + "];\n";
    for (EdgeId id : index.entity_edges()) {
        const auto& e = g.entity_edge(id);
        std::string label = e.label;
        for (const auto& [name, value] : e.attributes) label += "\n" + name + "=" + value.to_display();
        const char* style = e.kind == EntityEdgeKind::Composition      ? ", arrowhead=diamond"
                            : e.kind == EntityEdgeKind::Aggregation    ? ", arrowhead=odiamond"
                            : e.kind == EntityEdgeKind::Generalization ? ", arrowhead=empty"
                                                                       : "";
        out += "  " + nid.at(e.start) + " -> " + nid.at(e.end) + " [label=" + dot_quote(label) + style + "];\n";
    }
    for (EdgeId id : index.attribute_edges()) {
        const auto& e = g.attribute_edge(id);
        out += "  " + nid.at(e.start) + " -> " + nid.at(e.end) + " [style=dotted, arrowhead=none];\n";
    }
    for (EdgeId id : index.literal_edges()) {
        const auto& e = g.literal_edge(id);
        std::string label;
        for (const auto& [name, value] : e.context) label += (label.empty() ? "" : "\n") + name + "=" + value.to_display();
        out += "  " + nid.at(e.start) + " -> " + nid.at(e.end) + " [style=dashed, label=" + dot_quote(label) + "];\n";
    }
    return out + "}\n";
}

}  // namespace grad
