#include <map>
#include <set>

#include "grad/algebra.hpp"
#include "grad/identity.hpp"

namespace grad {

namespace {

[[noreturn]] void not_compliant(const std::string& what)
{
    throw GradError(ErrorCode::TemplateNotGradCompliant, what);
}

std::string spelled(const TemplateValue& v)
{
    return "${" + v.var + (v.field.empty() ? "" : "." + v.field) + "}";
}

void check_reference(const TemplateValue& v, const GraphPattern& p)
{
    if (!v.is_reference()) return;
    if (auto i = p.node_index(v.var)) {
        if (p.nodes[*i].kind == PatternNodeKind::Attribute && !v.field.empty())
            throw GradError(ErrorCode::UnboundTemplateVariable, spelled(v) + ": attribute nodes carry no named fields");
        return;
    }
    if (auto j = p.edge_index(v.var)) {
        const auto kind = p.edges[*j].kind;
        if (kind == PatternEdgeKind::Attribute)
            throw GradError(ErrorCode::UnboundTemplateVariable, spelled(v) + ": attribute edges carry no values");
        if (kind == PatternEdgeKind::Literal && v.field.empty())
            throw GradError(ErrorCode::UnboundTemplateVariable, spelled(v) + ": literal edges have no label");
        return;
    }
    throw GradError(ErrorCode::UnboundTemplateVariable, spelled(v) + ": '" + v.var + "' is not bound by the pattern");
}

void check_label(const TemplateValue& v, const std::string& where)
{
    if (v.is_reference()) return;
    if (v.constant.type() != Value::Type::Text || v.constant.as_string().empty())
        not_compliant(where + ": label must be non-empty text");
}

const Value* find(const Properties& props, const std::string& name)
{
    auto it = props.find(name);
    return it == props.end() ? nullptr : &it->second;
}

struct Resolver {
    const GraphPattern& p;
    const GradGraph& g;
    const Match& m;

    std::optional<Value> operator()(const TemplateValue& v) const
    {
        if (!v.is_reference()) return v.constant;
        if (auto i = p.node_index(v.var)) {
            const NodeId id = m.nodes.at(v.var);
            switch (p.nodes[*i].kind) {
            case PatternNodeKind::Entity: {
                const auto& node = g.entity(id);
                if (v.field.empty()) return Value(node.class_label);
                const Value* x = find(node.identifiers, v.field);
                return x ? std::optional<Value>(*x) : std::nullopt;
            }
            case PatternNodeKind::Attribute: return Value(g.attribute(id).label);
            case PatternNodeKind::Literal: {
                const auto& lit = g.literal(id);
                if (v.field.empty()) return lit.value;
                const Value* x = find(g.literal_edge(lit.edge).context, v.field);
                return x ? std::optional<Value>(*x) : std::nullopt;
            }
            }
        }
        const std::size_t j = *p.edge_index(v.var);
        const EdgeId e = m.edges.at(j);
        if (p.edges[j].kind == PatternEdgeKind::Entity) {
            const auto& edge = g.entity_edge(e);
            if (v.field.empty()) return Value(edge.label);
            const Value* x = find(edge.attributes, v.field);
            return x ? std::optional<Value>(*x) : std::nullopt;
        }
        const Value* x = find(g.literal_edge(e).context, v.field);
        return x ? std::optional<Value>(*x) : std::nullopt;
    }

    std::string label(const TemplateValue& v, const std::string& where) const
    {
        auto x = (*this)(v);
        if (!x || x->type() != Value::Type::Text || x->as_string().empty())
            not_compliant(where + ": " + (v.is_reference() ? spelled(v) : std::string("label")) +
                          " does not yield a non-empty text label");
        return x->as_string();
    }

    Properties properties(const TemplateProperties& props) const
    {
        Properties out;
        for (const auto& [name, v] : props)
            if (auto x = (*this)(v)) out.insert_or_assign(name, std::move(*x));
        return out;
    }
};

}  // namespace

void check_template(const GraphTemplate& t, const GraphPattern& p)
{
    std::set<std::string> entity_vars;
    std::set<std::string> attribute_vars;
    for (const auto& e : t.entities) {
        if (e.var.empty() || !entity_vars.insert(e.var).second) not_compliant("template entity variable '" + e.var + "' is empty or repeated");
        check_label(e.class_label, "template entity " + e.var);
        check_reference(e.class_label, p);
        if (e.identifiers.empty()) not_compliant("template entity " + e.var + " has no identifiers");
        for (const auto& [name, v] : e.identifiers) {
            if (name.empty()) not_compliant("template entity " + e.var + " has an empty identifier name");
            check_reference(v, p);
        }
    }
    for (const auto& a : t.attributes) {
        if (a.var.empty() || entity_vars.count(a.var) || !attribute_vars.insert(a.var).second)
            not_compliant("template attribute variable '" + a.var + "' is empty or repeated");
        if (!entity_vars.count(a.entity_var)) not_compliant("template attribute " + a.var + " has no template entity parent");
        check_label(a.label, "template attribute " + a.var);
        check_reference(a.label, p);
    }
    for (const auto& l : t.literals) {
        if (!attribute_vars.count(l.attribute_var)) not_compliant("template literal has no template attribute parent");
        check_reference(l.value, p);
        for (const auto& [name, v] : l.context) {
            if (!v.is_reference() && !v.constant.is_scalar()) not_compliant("template literal context '" + name + "' is composite");
            check_reference(v, p);
        }
    }
    std::set<std::pair<std::string, EntityEdgeKind>> parents;
    for (const auto& e : t.edges) {
        const std::string where = "template edge " + e.start_var + "->" + e.end_var;
        if (!entity_vars.count(e.start_var) || !entity_vars.count(e.end_var)) not_compliant(where + ": endpoint is not a template entity");
        check_label(e.label, where);
        check_reference(e.label, p);
        for (const auto& [_, v] : e.attributes) check_reference(v, p);
        if (is_parent_kind(e.kind)) {
            if (e.symmetric) not_compliant(where + ": only Association edges can be symmetric");
            if (!parents.emplace(e.start_var, e.kind).second)
                not_compliant(where + ": second outgoing " + std::string(to_string(e.kind)) + " edge");
        }
    }
}

GradGraph instantiate(const GraphTemplate& t, const GraphPattern& p, const GradGraph& g, const Match& m)
{
    const Resolver resolve{p, g, m};
    GradGraph out;
    std::map<std::string, NodeId> nodes;

    for (const auto& e : t.entities) {
        const std::string cls = resolve.label(e.class_label, "template entity " + e.var);
        Identifiers ids = resolve.properties(e.identifiers);
        if (ids.empty()) not_compliant("template entity " + e.var + " instantiates without identifiers");
        nodes[e.var] = out.add_entity_node(cls, std::move(ids));
    }
    for (const auto& a : t.attributes)
        nodes[a.var] = out.add_attribute(nodes.at(a.entity_var), resolve.label(a.label, "template attribute " + a.var));
    for (const auto& l : t.literals) {
        auto value = resolve(l.value);
        if (!value) continue;
        Properties ctx = resolve.properties(l.context);
        for (const auto& [name, v] : ctx)
            if (!v.is_scalar()) not_compliant("literal context '" + name + "' instantiates to a composite value");
        out.add_literal(nodes.at(l.attribute_var), std::move(*value), std::move(ctx));
    }

    // Parent edges first: symmetric endpoints are ordered by identity key,
    // which for weak nodes depends on their owner.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : t.edges) {
            if (is_parent_kind(e.kind) != (pass == 0)) continue;
            NodeId s = nodes.at(e.start_var);
            NodeId d = nodes.at(e.end_var);
            if (e.symmetric && ordering_key(out, d) < ordering_key(out, s)) std::swap(s, d);
            out.add_entity_edge(s, d, e.kind, resolve.label(e.label, "template edge " + e.start_var + "->" + e.end_var),
                                resolve.properties(e.attributes));
        }
    }
    return out;
}

}  // namespace grad
