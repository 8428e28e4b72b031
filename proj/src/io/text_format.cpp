#include "grad/text_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "grad/io.hpp"

namespace grad {

namespace {

[[noreturn]] void fail(const std::string& what, std::size_t line)
{
    throw GradError(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what, line);
}

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> lines_of(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++number;
        auto tokens = tokenize(line, number);
        if (!tokens.empty()) out.push_back({number, std::move(tokens)});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

Value typed_constant(const std::string& token, std::size_t line)
{
    try {
        return decode_value(token);
    } catch (const GradError& err) {
        fail(err.what(), line);
    }
}

CompareOp parse_op(const std::string& token, std::size_t line)
{
    if (token == "<") return CompareOp::Less;
    if (token == "<=") return CompareOp::LessEqual;
    if (token == "=") return CompareOp::Equal;
    if (token == ">=") return CompareOp::GreaterEqual;
    if (token == ">") return CompareOp::Greater;
    if (token == "!=") return CompareOp::NotEqual;
    fail("unknown comparison operator '" + token + "'", line);
}

/// Reads `target op constant` triples from tokens[first, last).
std::vector<AtomicPredicate> parse_predicates(const std::vector<std::string>& tokens, std::size_t first, std::size_t last,
                                              bool on_edge, std::size_t line)
{
    std::vector<AtomicPredicate> out;
    if ((last - first) % 3 != 0) fail("predicates come as 'target op constant' triples", line);
    for (std::size_t i = first; i < last; i += 3) {
        AtomicPredicate pred;
        const std::string& target = tokens[i];
        pred.op = parse_op(tokens[i + 1], line);
        if (target == "label") {
            pred.target = on_edge ? PredicateTarget::EdgeLabel : PredicateTarget::NodeLabel;
            pred.constant = Value(tokens[i + 2]);
        } else {
            if (target == "value") {
                pred.target = PredicateTarget::LiteralValue;
            } else if (target.rfind("id.", 0) == 0 && target.size() > 3) {
                pred.target = PredicateTarget::Identifier;
                pred.name = target.substr(3);
            } else if (target.rfind("attr.", 0) == 0 && target.size() > 5) {
                pred.target = PredicateTarget::EdgeAttribute;
                pred.name = target.substr(5);
            } else {
                fail("unknown predicate target '" + target + "'", line);
            }
            pred.constant = typed_constant(tokens[i + 2], line);
        }
        out.push_back(std::move(pred));
    }
    return out;
}

std::string write_predicates(const std::vector<AtomicPredicate>& preds)
{
    std::string out;
    for (const auto& pred : preds) {
        std::string target;
        switch (pred.target) {
        case PredicateTarget::NodeLabel:
        case PredicateTarget::EdgeLabel: target = "label"; break;
        case PredicateTarget::LiteralValue: target = "value"; break;
        case PredicateTarget::Identifier: target = "id." + pred.name; break;
        case PredicateTarget::EdgeAttribute: target = "attr." + pred.name; break;
        }
        const bool label = pred.target == PredicateTarget::NodeLabel || pred.target == PredicateTarget::EdgeLabel;
        const std::string constant =
            label && pred.constant.type() == Value::Type::Text ? pred.constant.as_string() : encode_value(pred.constant);
        out += " " + quote_token(target) + " " + to_symbol(pred.op) + " " + quote_token(constant);
    }
    return out;
}

const char* node_kind_name(PatternNodeKind kind)
{
    switch (kind) {
    case PatternNodeKind::Entity: return "entity";
    case PatternNodeKind::Attribute: return "attribute";
    case PatternNodeKind::Literal: return "literal";
    }
    return "?";
}

const char* edge_kind_name(PatternEdgeKind kind)
{
    switch (kind) {
    case PatternEdgeKind::Entity: return "entity";
    case PatternEdgeKind::Attribute: return "attribute";
    case PatternEdgeKind::Literal: return "literal";
    }
    return "?";
}

bool is_reference(const std::string& token) { return token.size() > 3 && token.rfind("${", 0) == 0 && token.back() == '}'; }

TemplateValue template_reference(const std::string& token, std::size_t line)
{
    const std::string body = token.substr(2, token.size() - 3);
    const std::size_t dot = body.find('.');
    TemplateValue v = TemplateValue::ref(body.substr(0, dot), dot == std::string::npos ? "" : body.substr(dot + 1));
    if (v.var.empty() || (dot != std::string::npos && v.field.empty())) fail("malformed reference '" + token + "'", line);
    return v;
}

TemplateValue template_value(const std::string& token, std::size_t line)
{
    if (is_reference(token)) return template_reference(token, line);
    return TemplateValue::of(typed_constant(token, line));
}

TemplateValue template_label(const std::string& token, std::size_t line)
{
    if (is_reference(token)) return template_reference(token, line);
    return TemplateValue::of(Value(token));
}

std::string write_template_value(const TemplateValue& v, bool label)
{
    if (v.is_reference()) return "${" + v.var + (v.field.empty() ? "" : "." + v.field) + "}";
    if (label && v.constant.type() == Value::Type::Text) return v.constant.as_string();
    return encode_value(v.constant);
}

TemplateProperties template_properties(const std::vector<std::string>& tokens, std::size_t first, std::size_t last,
                                       std::size_t line)
{
    TemplateProperties out;
    for (std::size_t i = first; i < last; ++i) {
        const std::size_t eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0) fail("expected name=value, got '" + tokens[i] + "'", line);
        out.emplace_back(tokens[i].substr(0, eq), template_value(tokens[i].substr(eq + 1), line));
    }
    return out;
}

std::string write_template_properties(const TemplateProperties& props)
{
    std::string out;
    for (const auto& [name, v] : props) out += " " + quote_token(name + "=" + write_template_value(v, false));
    return out;
}

EntityEdgeKind entity_kind(const std::string& token, std::size_t line)
{
    auto kind = parse_entity_edge_kind(token);
    if (!kind) fail("unknown entity edge kind '" + token + "'", line);
    return *kind;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view line, std::size_t line_number)
{
    std::vector<std::string> tokens;
    std::string current;
    bool in_token = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            if (in_token) tokens.push_back(std::move(current));
            current.clear();
            in_token = false;
            continue;
        }
        in_token = true;
        if (c != '"') {
            current += c;
            continue;
        }
        bool closed = false;
        for (++i; i < line.size(); ++i) {
            if (line[i] == '"') {
                closed = true;
                break;
            }
            if (line[i] == '\\' && i + 1 < line.size() && (line[i + 1] == '"' || line[i + 1] == '\\')) ++i;
            current += line[i];
        }
        if (!closed) fail("unterminated quote", line_number);
    }
    if (in_token) tokens.push_back(std::move(current));
    return tokens;
}

std::string quote_token(const std::string& token)
{
    if (!token.empty() && token.find_first_of(" \t\r\"#") == std::string::npos) return token;
    std::string out = "\"";
    for (char c : token) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

GraphPattern parse_pattern(std::string_view text)
{
    GraphPattern p;
    enum { None, Nodes, Edges } section = None;
    for (const auto& [n, t] : lines_of(text)) {
        if (t.size() == 1 && t[0] == "nodes") {
            section = Nodes;
            continue;
        }
        if (t.size() == 1 && t[0] == "edges") {
            section = Edges;
            continue;
        }
        if (section == None) fail("expected a 'nodes' or 'edges' section header", n);
        if (section == Nodes) {
            if (t.size() < 2) fail("node line needs a variable and a kind", n);
            PatternNode node;
            node.var = t[0];
            if (t[1] == "entity") node.kind = PatternNodeKind::Entity;
            else if (t[1] == "attribute") node.kind = PatternNodeKind::Attribute;
            else if (t[1] == "literal") node.kind = PatternNodeKind::Literal;
            else fail("unknown node kind '" + t[1] + "'", n);
            node.predicates = parse_predicates(t, 2, t.size(), false, n);
            p.nodes.push_back(std::move(node));
        } else {
            if (t.size() < 3) fail("edge line needs start, end and kind", n);
            PatternEdge edge;
            edge.start_var = t[0];
            edge.end_var = t[1];
            const std::string& kind = t[2];
            const std::size_t colon = kind.find(':');
            const std::string base = kind.substr(0, colon);
            if (base == "entity") edge.kind = PatternEdgeKind::Entity;
            else if (base == "attribute") edge.kind = PatternEdgeKind::Attribute;
            else if (base == "literal") edge.kind = PatternEdgeKind::Literal;
            else fail("unknown edge kind '" + kind + "'", n);
            if (colon != std::string::npos) edge.entity_kind = entity_kind(kind.substr(colon + 1), n);
            std::size_t last = t.size();
            if (last >= 5 && t[last - 2] == "as") {
                edge.var = t[last - 1];
                last -= 2;
            }
            edge.predicates = parse_predicates(t, 3, last, true, n);
            p.edges.push_back(std::move(edge));
        }
    }
    return p;
}

std::string write_pattern(const GraphPattern& p)
{
    std::string out = "nodes\n";
    for (const auto& node : p.nodes)
        out += "  " + quote_token(node.var) + " " + node_kind_name(node.kind) + write_predicates(node.predicates) + "\n";
    out += "edges\n";
    for (const auto& edge : p.edges) {
        std::string kind = edge_kind_name(edge.kind);
        if (edge.entity_kind) kind += std::string(":") + to_string(*edge.entity_kind);
        out += "  " + quote_token(edge.start_var) + " " + quote_token(edge.end_var) + " " + kind + write_predicates(edge.predicates);
        if (!edge.var.empty()) out += " as " + quote_token(edge.var);
        out += "\n";
    }
    return out;
}

GraphTemplate parse_template(std::string_view text)
{
    GraphTemplate t;
    enum { None, Entities, Attributes, Literals, Edges } section = None;
    for (const auto& [n, tok] : lines_of(text)) {
        if (tok.size() == 1) {
            if (tok[0] == "entities") { section = Entities; continue; }
            if (tok[0] == "attributes") { section = Attributes; continue; }
            if (tok[0] == "literals") { section = Literals; continue; }
            if (tok[0] == "edges") { section = Edges; continue; }
        }
        switch (section) {
        case None: fail("expected a section header (entities, attributes, literals, edges)", n);
        case Entities:
            if (tok.size() < 3) fail("entity line needs a variable, a class and identifiers", n);
            t.entities.push_back({tok[0], template_label(tok[1], n), template_properties(tok, 2, tok.size(), n)});
            break;
        case Attributes:
            if (tok.size() != 3) fail("attribute line needs a variable, its entity and a label", n);
            t.attributes.push_back({tok[0], tok[1], template_label(tok[2], n)});
            break;
        case Literals:
            if (tok.size() < 2) fail("literal line needs its attribute and a value", n);
            t.literals.push_back({tok[0], template_value(tok[1], n), template_properties(tok, 2, tok.size(), n)});
            break;
        case Edges: {
            if (tok.size() < 4) fail("edge line needs start, end, kind and label", n);
            TemplateEdge edge{tok[0], tok[1], entity_kind(tok[2], n), template_label(tok[3], n), {}, false};
            std::size_t last = tok.size();
            if (tok.back() == "symmetric") {
                edge.symmetric = true;
                --last;
            }
            edge.attributes = template_properties(tok, 4, last, n);
            t.edges.push_back(std::move(edge));
            break;
        }
        }
    }
    return t;
}

std::string write_template(const GraphTemplate& t)
{
    std::string out = "entities\n";
    for (const auto& e : t.entities)
        out += "  " + quote_token(e.var) + " " + quote_token(write_template_value(e.class_label, true)) +
               write_template_properties(e.identifiers) + "\n";
    out += "attributes\n";
    for (const auto& a : t.attributes)
        out += "  " + quote_token(a.var) + " " + quote_token(a.entity_var) + " " + quote_token(write_template_value(a.label, true)) + "\n";
    out += "literals\n";
    for (const auto& l : t.literals)
        out += "  " + quote_token(l.attribute_var) + " " + quote_token(write_template_value(l.value, false)) +
               write_template_properties(l.context) + "\n";
    out += "edges\n";
    for (const auto& e : t.edges) {
        out += "  " + quote_token(e.start_var) + " " + quote_token(e.end_var) + " " + to_string(e.kind) + " " +
               quote_token(write_template_value(e.label, true)) + write_template_properties(e.attributes);
        if (e.symmetric) out += " symmetric";
        out += "\n";
    }
    return out;
}

CountRange parse_count_range(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '[' && c != ']') s += c;
    auto number = [&](std::string_view x) {
        std::size_t v = 0;
        auto res = std::from_chars(x.data(), x.data() + x.size(), v);
        if (x.empty() || res.ec != std::errc() || res.ptr != x.data() + x.size())
            throw GradError(ErrorCode::ParseError, "bad count '" + std::string(x) + "' in range " + std::string(text));
        return v;
    };
    if (s == "*") return {0, std::nullopt};
    const std::size_t dots = s.find("..");
    if (dots == std::string::npos) {
        const std::size_t n = number(s);
        return {n, n};
    }
    CountRange r{number(std::string_view(s).substr(0, dots)), std::nullopt};
    const std::string_view upper = std::string_view(s).substr(dots + 2);
    if (upper != "*") r.max = number(upper);
    return r;
}

ConstraintSet parse_constraints(std::string_view text, const std::filesystem::path& base_dir)
{
    ConstraintSet out;
    for (const auto& [n, t] : lines_of(text)) {
        try {
            if (t[0] == "assert") {
                if (t.size() < 4) fail("assert needs a name, a pattern file and at least one anchor", n);
                Assertion a;
                a.name = t[1];
                const auto path = base_dir / t[2];
                try {
                    a.pattern = parse_pattern(read_file(path));
                } catch (const GradError& err) {
                    throw GradError(err.code(), path.string() + ": " + err.what(), n);
                }
                a.anchor_vars.assign(t.begin() + 3, t.end());
                check_well_formed(a);
                require_valid(validate_pattern(a.pattern));
                out.assertions.push_back(std::move(a));
                continue;
            }
            if (t.size() < 4) fail("multiplicity needs source class, edge label, target class and a range", n);
            Multiplicity m{t[0], t[1], t[2], {}, {}, std::nullopt};
            std::string ranges;
            for (std::size_t i = 3; i < t.size(); ++i) {
                if (t[i].rfind("kind=", 0) == 0) {
                    m.edge_kind = entity_kind(t[i].substr(5), n);
                    continue;
                }
                ranges += t[i];
            }
            // [a, b]  or  [a] [b]  or  [a]
            std::vector<std::string> parts;
            std::string current;
            for (char c : ranges) {
                if (c == ',' || c == ']') {
                    if (!current.empty()) parts.push_back(current);
                    current.clear();
                } else if (c != '[') {
                    current += c;
                }
            }
            if (!current.empty()) parts.push_back(current);
            if (parts.empty() || parts.size() > 2) fail("expected one or two count ranges, got '" + ranges + "'", n);
            m.forward = parse_count_range(parts[0]);
            if (parts.size() == 2) m.backward = parse_count_range(parts[1]);
            check_well_formed(m);
            out.multiplicities.push_back(std::move(m));
        } catch (const GradError& err) {
            if (err.line()) throw;
            throw GradError(err.code(), "line " + std::to_string(n) + ": " + err.what(), n);
        }
    }
    return out;
}

JoinPredicate parse_join_predicate(std::string_view text)
{
    JoinPredicate pr;
    for (const auto& [n, t] : lines_of(text)) {
        if (t[0] != "merge") fail("expected 'merge CLASS identifier...'", n);
        if (t.size() < 3) throw GradError(ErrorCode::InvalidJoinPredicate, "line " + std::to_string(n) + ": merge rule names no identifier", n);
        pr.rules.push_back({t[1], std::vector<std::string>(t.begin() + 2, t.end())});
    }
    check_well_formed(pr);
    return pr;
}

std::string write_join_predicate(const JoinPredicate& pr)
{
    std::string out;
    for (const auto& rule : pr.rules) {
        out += "merge " + quote_token(rule.class_label);
        for (const auto& name : rule.match_on) out += " " + quote_token(name);
        out += "\n";
    }
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GradError(ErrorCode::ParseError, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace grad
