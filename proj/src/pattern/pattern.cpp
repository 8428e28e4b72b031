#include "grad/pattern.hpp"

#include <map>
#include <set>

namespace grad {

namespace {

bool allowed_on_node(PatternNodeKind kind, PredicateTarget target)
{
    switch (kind) {
    case PatternNodeKind::Entity: return target == PredicateTarget::NodeLabel || target == PredicateTarget::Identifier;
    case PatternNodeKind::Attribute: return target == PredicateTarget::NodeLabel;
    case PatternNodeKind::Literal: return target == PredicateTarget::LiteralValue;
    }
    return false;
}

bool allowed_on_edge(PatternEdgeKind kind, PredicateTarget target)
{
    switch (kind) {
    case PatternEdgeKind::Entity: return target == PredicateTarget::EdgeLabel || target == PredicateTarget::EdgeAttribute;
    case PatternEdgeKind::Attribute: return false;
    case PatternEdgeKind::Literal: return target == PredicateTarget::EdgeAttribute;
    }
    return false;
}

const char* kind_name(PatternNodeKind kind)
{
    switch (kind) {
    case PatternNodeKind::Entity: return "entity";
    case PatternNodeKind::Attribute: return "attribute";
    case PatternNodeKind::Literal: return "literal";
    }
    return "?";
}

const char* kind_name(PatternEdgeKind kind)
{
    switch (kind) {
    case PatternEdgeKind::Entity: return "entity";
    case PatternEdgeKind::Attribute: return "attribute";
    case PatternEdgeKind::Literal: return "literal";
    }
    return "?";
}

void check_predicate(const AtomicPredicate& pred, bool allowed, const std::string& where,
                     std::vector<PatternIssue>& issues)
{
    if (!allowed) {
        issues.push_back({PatternRule::IllegalPredicateTarget, where + ": predicate target not supported by this element kind"});
        return;
    }
    const bool label = pred.target == PredicateTarget::NodeLabel || pred.target == PredicateTarget::EdgeLabel;
    if (label) {
        if (pred.op != CompareOp::Equal && pred.op != CompareOp::NotEqual)
            issues.push_back({PatternRule::IllegalLabelOperator, where + ": labels compare only with = or !="});
        else if (pred.constant.type() != Value::Type::Text)
            issues.push_back({PatternRule::IllegalLabelOperator, where + ": label constant must be text"});
    }
    const bool named = pred.target == PredicateTarget::Identifier || pred.target == PredicateTarget::EdgeAttribute;
    if (named && pred.name.empty())
        issues.push_back({PatternRule::IllegalPredicateTarget, where + ": predicate needs a property name"});
}

bool selects_class(const PatternNode& node, const std::string& class_label)
{
    for (const auto& pred : node.predicates) {
        if (pred.target == PredicateTarget::NodeLabel && pred.op == CompareOp::Equal &&
            pred.constant.type() == Value::Type::Text && pred.constant.as_string() == class_label)
            return true;
    }
    return false;
}

}  // namespace

std::optional<std::size_t> GraphPattern::node_index(const std::string& var) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].var == var) return i;
    return std::nullopt;
}

std::optional<std::size_t> GraphPattern::edge_index(const std::string& var) const
{
    if (var.empty()) return std::nullopt;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].var == var) return i;
    return std::nullopt;
}

const char* to_string(PatternRule rule)
{
    switch (rule) {
    case PatternRule::DuplicateVariable: return "DuplicateVariable";
    case PatternRule::UnknownVariable: return "UnknownVariable";
    case PatternRule::IllegalEndpointKinds: return "IllegalEndpointKinds";
    case PatternRule::IllegalPredicateTarget: return "IllegalPredicateTarget";
    case PatternRule::IllegalLabelOperator: return "IllegalLabelOperator";
    case PatternRule::MissingParent: return "MissingParent";
    case PatternRule::MultipleAttributeParents: return "MultipleAttributeParents";
    case PatternRule::MultipleLiteralParents: return "MultipleLiteralParents";
    case PatternRule::WeakNodeWithoutParent: return "WeakNodeWithoutParent";
    }
    return "?";
}

std::vector<PatternIssue> validate_pattern(const GraphPattern& p)
{
    std::vector<PatternIssue> issues;
    std::map<std::string, PatternNodeKind> kinds;
    std::set<std::string> names;

    for (const auto& node : p.nodes) {
        if (node.var.empty()) {
            issues.push_back({PatternRule::UnknownVariable, "pattern node without a variable name"});
            continue;
        }
        if (!names.insert(node.var).second)
            issues.push_back({PatternRule::DuplicateVariable, "variable '" + node.var + "' declared twice"});
        kinds.emplace(node.var, node.kind);
        for (const auto& pred : node.predicates)
            check_predicate(pred, allowed_on_node(node.kind, pred.target), std::string(kind_name(node.kind)) + " node '" + node.var + "'", issues);
    }

    std::map<std::string, int> attribute_parents;
    std::map<std::string, int> literal_parents;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto& edge = p.edges[i];
        const std::string where = std::string(kind_name(edge.kind)) + " edge " + edge.start_var + "->" + edge.end_var;
        if (!edge.var.empty() && !names.insert(edge.var).second)
            issues.push_back({PatternRule::DuplicateVariable, "variable '" + edge.var + "' declared twice"});
        for (const auto& pred : edge.predicates) check_predicate(pred, allowed_on_edge(edge.kind, pred.target), where, issues);
        if (edge.entity_kind && edge.kind != PatternEdgeKind::Entity)
            issues.push_back({PatternRule::IllegalEndpointKinds, where + ": only entity edges carry an entity-edge kind"});

        auto start = kinds.find(edge.start_var);
        auto end = kinds.find(edge.end_var);
        if (start == kinds.end() || end == kinds.end()) {
            issues.push_back({PatternRule::UnknownVariable, where + ": endpoint variable not declared"});
            continue;
        }
        bool legal = false;
        switch (edge.kind) {
        case PatternEdgeKind::Entity:
            legal = start->second == PatternNodeKind::Entity && end->second == PatternNodeKind::Entity;
            break;
        case PatternEdgeKind::Attribute:
            legal = start->second == PatternNodeKind::Entity && end->second == PatternNodeKind::Attribute;
            if (legal) ++attribute_parents[edge.end_var];
            break;
        case PatternEdgeKind::Literal:
            legal = start->second == PatternNodeKind::Attribute && end->second == PatternNodeKind::Literal;
            if (legal) ++literal_parents[edge.end_var];
            break;
        }
        if (!legal)
            issues.push_back({PatternRule::IllegalEndpointKinds, where + ": endpoint kinds do not fit the edge kind"});
    }

    for (const auto& node : p.nodes) {
        if (node.kind == PatternNodeKind::Attribute) {
            int n = attribute_parents[node.var];
            if (n == 0) issues.push_back({PatternRule::MissingParent, "attribute node '" + node.var + "' is not attached to an entity node"});
            if (n > 1) issues.push_back({PatternRule::MultipleAttributeParents, "attribute node '" + node.var + "' has several entity parents"});
        } else if (node.kind == PatternNodeKind::Literal) {
            int n = literal_parents[node.var];
            if (n == 0) issues.push_back({PatternRule::MissingParent, "literal node '" + node.var + "' is not attached to an attribute node"});
            if (n > 1) issues.push_back({PatternRule::MultipleLiteralParents, "literal node '" + node.var + "' has several attribute parents"});
        }
    }
    return issues;
}

std::vector<PatternIssue> validate_pattern(const GraphPattern& p, const GradGraph& g)
{
    auto issues = validate_pattern(p);
    std::set<std::string> weak_classes;
    for (const auto& [id, node] : g.entity_nodes())
        if (g.composition_parent(id)) weak_classes.insert(node.class_label);

    for (const auto& node : p.nodes) {
        if (node.kind != PatternNodeKind::Entity) continue;
        for (const auto& cls : weak_classes) {
            if (!selects_class(node, cls)) continue;
            bool owner_present = false;
            for (const auto& edge : p.edges) {
                if (edge.kind == PatternEdgeKind::Entity && edge.start_var == node.var &&
                    edge.entity_kind == EntityEdgeKind::Composition)
                    owner_present = true;
            }
            if (!owner_present)
                issues.push_back({PatternRule::WeakNodeWithoutParent,
                                  "entity node '" + node.var + "' selects weak class " + cls + " without its owner"});
        }
    }
    return issues;
}

void require_valid(const std::vector<PatternIssue>& issues)
{
    if (issues.empty()) return;
    throw GradError(ErrorCode::InvalidPattern, std::string(to_string(issues.front().rule)) + ": " + issues.front().message);
}

bool evaluate(const AtomicPredicate& pred, const Value* actual)
{
    if (!actual) return false;
    try {
        return compare_values(*actual, pred.op, pred.constant);
    } catch (const GradError&) {
        return false;
    }
}

}  // namespace grad
