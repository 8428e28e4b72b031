#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>

#include "grad/identity.hpp"
#include "grad/io.hpp"

namespace grad {

namespace {

constexpr std::string_view kMagic = "grad/1";

[[noreturn]] void parse_error(const std::string& what, std::size_t line = 0)
{
    throw GradError(ErrorCode::ParseError, line ? "line " + std::to_string(line) + ": " + what : what, line);
}

void escape_into(std::string& out, std::string_view text, bool name)
{
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '=': out += name ? "\\=" : "="; break;
        case ',': out += name ? "," : "\\,"; break;
        case '[': out += name ? "[" : "\\["; break;
        case ']': out += name ? "]" : "\\]"; break;
        default: out += c;
        }
    }
}

std::string escape_name(std::string_view text)
{
    std::string out;
    escape_into(out, text, true);
    return out;
}

char unescape_char(char c)
{
    switch (c) {
    case 't': return '\t';
    case 'n': return '\n';
    case 'r': return '\r';
    case '\\': case '=': case ',': case '[': case ']': return c;
    default: parse_error(std::string("unknown escape \\") + c);
    }
}

std::string unescape(std::string_view text)
{
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\\') {
            out += text[i];
            continue;
        }
        if (++i == text.size()) parse_error("dangling backslash");
        out += unescape_char(text[i]);
    }
    return out;
}

void encode_into(std::string& out, const Value& v)
{
    switch (v.type()) {
    case Value::Type::Boolean: out += v.as_bool() ? "b:true" : "b:false"; break;
    case Value::Type::Integer: out += "i:" + std::to_string(v.as_int()); break;
    case Value::Type::Decimal: {
        if (std::isnan(v.as_double())) throw GradError(ErrorCode::SinkError, "NaN is not representable");
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, v.as_double());
        out += "f:";
        out.append(buf, res.ptr);
        break;
    }
    case Value::Type::Text:
        out += "s:";
        escape_into(out, v.as_string(), false);
        break;
    case Value::Type::Composite: {
        out += "c:[";
        bool first = true;
        for (const auto& x : v.as_composite()) {
            if (!first) out += ",";
            first = false;
            encode_into(out, x);
        }
        out += "]";
        break;
    }
    }
}

/// Recursive-descent value reader. Inside a composite, `,` and `]` end a
/// scalar; at top level the value runs to the end of the field.
class ValueReader {
public:
    explicit ValueReader(std::string_view text) : text_(text) {}

    Value read_all()
    {
        Value v = read(false);
        if (pos_ != text_.size()) parse_error("trailing characters in value '" + std::string(text_) + "'");
        return v;
    }

private:
    Value read(bool nested)
    {
        if (text_.size() - pos_ < 2 || text_[pos_ + 1] != ':') parse_error("value '" + std::string(text_) + "' lacks a type tag");
        const char tag = text_[pos_];
        pos_ += 2;
        switch (tag) {
        case 's': return Value(read_text(nested));
        case 'i': {
            const std::string_view token = read_token(nested);
            std::int64_t x = 0;
            auto res = std::from_chars(token.data(), token.data() + token.size(), x);
            if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size())
                parse_error("bad integer '" + std::string(token) + "'");
            return Value(x);
        }
        case 'f': {
            const std::string_view token = read_token(nested);
            double x = 0;
            auto res = std::from_chars(token.data(), token.data() + token.size(), x);
            if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() || std::isnan(x))
                parse_error("bad decimal '" + std::string(token) + "'");
            return Value(x);
        }
        case 'b': {
            const std::string_view token = read_token(nested);
            if (token == "true") return Value(true);
            if (token == "false") return Value(false);
            parse_error("bad boolean '" + std::string(token) + "'");
        }
        case 'c': {
            if (pos_ >= text_.size() || text_[pos_] != '[') parse_error("composite must start with '['");
            ++pos_;
            Value::Composite parts;
            while (true) {
                parts.push_back(read(true));
                if (pos_ >= text_.size()) parse_error("unterminated composite");
                if (text_[pos_++] == ']') break;
            }
            return Value::composite(std::move(parts));
        }
        default: parse_error(std::string("unknown type tag '") + tag + ":'");
        }
    }

    std::string_view read_token(bool nested)
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !(nested && (text_[pos_] == ',' || text_[pos_] == ']'))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string read_text(bool nested)
    {
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (nested && (c == ',' || c == ']')) break;
            ++pos_;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ == text_.size()) parse_error("dangling backslash");
            out += unescape_char(text_[pos_++]);
        }
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string encode_properties(const Properties& props)
{
    std::string out;
    for (const auto& [name, value] : props) {
        out += '\t';
        out += escape_name(name);
        out += '=';
        encode_into(out, value);
    }
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return fields;
}

Properties decode_properties(const std::vector<std::string_view>& fields, std::size_t first, std::size_t line)
{
    Properties props;
    for (std::size_t i = first; i < fields.size(); ++i) {
        const std::string_view field = fields[i];
        std::size_t eq = std::string_view::npos;
        for (std::size_t k = 0; k < field.size(); ++k) {
            if (field[k] == '\\') {
                ++k;
            } else if (field[k] == '=') {
                eq = k;
                break;
            }
        }
        if (eq == std::string_view::npos) parse_error("property '" + std::string(field) + "' lacks '='", line);
        try {
            std::string name = unescape(field.substr(0, eq));
            if (name.empty()) parse_error("empty property name", line);
            if (!props.emplace(std::move(name), decode_value(field.substr(eq + 1))).second)
                parse_error("repeated property name", line);
        } catch (const GradError& err) {
            if (err.line()) throw;
            parse_error(err.what(), line);
        }
    }
    return props;
}

/// Splits text into lines, tolerating a final newline and CRLF endings.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line)
    {
        if (pos_ >= text_.size()) return false;
        const std::size_t nl = text_.find('\n', pos_);
        const std::size_t end = nl == std::string_view::npos ? text_.size() : nl;
        line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
        ++number_;
        return true;
    }

    std::size_t number() const noexcept { return number_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t number_ = 0;
};

struct PendingAttribute {
    std::string label;
    std::size_t line;
    bool attached = false;
};

struct PendingLiteral {
    Value value;
    std::size_t line;
    bool attached = false;
};

/// Reads one document starting at the reader's position. Returns false at
/// end of input before any header.
bool read_document(LineReader& reader, GradGraph& out)
{
    std::string_view line;
    do {
        if (!reader.next(line)) return false;
    } while (line.empty());
    const std::size_t header_line = reader.number();

    const auto header = split_tabs(line);
    if (header[0] != kMagic) {
        if (header[0].substr(0, 5) == "grad/")
            throw GradError(ErrorCode::UnsupportedVersion, "document version '" + std::string(header[0]) + "' is not grad/1", header_line);
        parse_error("missing grad/1 header", header_line);
    }
    if (header.size() != 3) parse_error("header needs version, mode and record count", header_line);
    GraphMode mode;
    if (header[1] == "lax") mode = GraphMode::Lax;
    else if (header[1] == "strict") mode = GraphMode::Strict;
    else parse_error("unknown graph mode '" + std::string(header[1]) + "'", header_line);
    std::size_t count = 0;
    {
        auto res = std::from_chars(header[2].data(), header[2].data() + header[2].size(), count);
        if (header[2].empty() || res.ec != std::errc() || res.ptr != header[2].data() + header[2].size())
            parse_error("bad record count", header_line);
    }

    GradGraph g(mode);
    std::map<std::string, NodeId, std::less<>> entities;
    std::map<std::string, PendingAttribute, std::less<>> attributes;
    std::map<std::string, PendingLiteral, std::less<>> literals;
    std::map<std::string, NodeId, std::less<>> attribute_handles;
    std::set<std::string, std::less<>> declared;
    struct Deferred {
        std::vector<std::string_view> fields;
        std::size_t line;
    };
    std::vector<Deferred> entity_edges;
    std::deque<std::string> storage;  // keeps deferred lines alive

    // Record kinds must appear in this order.
    const std::vector<std::string_view> kinds{"N", "A", "L", "E", "AE", "LE"};
    std::size_t stage = 0;

    auto declare = [&](std::string_view nid, std::size_t at) {
        if (nid.size() < 2 || nid[0] != 'n') parse_error("bad node id '" + std::string(nid) + "'", at);
        if (!declared.emplace(nid).second) parse_error("node id " + std::string(nid) + " declared twice", at);
    };
    auto guarded = [&](std::size_t at, auto&& fn) {
        try {
            fn();
        } catch (const GradError& err) {
            if (err.code() == ErrorCode::ParseError) throw;
            parse_error(err.what(), at);
        }
    };

    for (std::size_t r = 0; r < count; ++r) {
        if (!reader.next(line)) parse_error("document ends after " + std::to_string(r) + " of " + std::to_string(count) + " records", reader.number());
        const std::size_t at = reader.number();
        storage.emplace_back(line);
        const auto fields = split_tabs(storage.back());

        std::size_t kind = 0;
        while (kind < kinds.size() && fields[0] != kinds[kind]) ++kind;
        if (kind == kinds.size()) parse_error("unknown record type '" + std::string(fields[0]) + "'", at);
        if (kind < stage) parse_error("record " + std::string(fields[0]) + " out of order", at);
        stage = kind;

        switch (kind) {
        case 0: {  // N
            if (fields.size() < 4) parse_error("entity record needs an id, a class and identifiers", at);
            declare(fields[1], at);
            const std::string cls = unescape(fields[2]);
            Properties ids = decode_properties(fields, 3, at);
            guarded(at, [&] { entities.emplace(fields[1], g.add_entity_node(cls, std::move(ids))); });
            break;
        }
        case 1: {  // A
            if (fields.size() != 3) parse_error("attribute record needs an id and a label", at);
            declare(fields[1], at);
            attributes.emplace(fields[1], PendingAttribute{unescape(fields[2]), at});
            break;
        }
        case 2: {  // L
            if (fields.size() != 3) parse_error("literal record needs an id and a value", at);
            declare(fields[1], at);
            Value v;
            guarded(at, [&] { v = decode_value(fields[2]); });
            literals.emplace(fields[1], PendingLiteral{std::move(v), at});
            break;
        }
        case 3: {  // E
            if (fields.size() < 5) parse_error("entity edge record needs start, end, kind and label", at);
            entity_edges.push_back({fields, at});
            break;
        }
        case 4: {  // AE
            if (fields.size() != 3) parse_error("attribute edge record needs two ids", at);
            auto s = entities.find(fields[1]);
            auto a = attributes.find(fields[2]);
            if (s == entities.end() || a == attributes.end())
                parse_error("DanglingReference: attribute edge " + std::string(fields[1]) + "->" + std::string(fields[2]), at);
            if (a->second.attached) parse_error("attribute node " + std::string(fields[2]) + " has two attribute edges", at);
            if (g.attribute_of(s->second, a->second.label))
                parse_error("entity " + std::string(fields[1]) + " has two attribute nodes labeled " + a->second.label, at);
            guarded(at, [&] { attribute_handles.emplace(fields[2], g.add_attribute(s->second, a->second.label)); });
            a->second.attached = true;
            break;
        }
        case 5: {  // LE
            if (fields.size() < 3) parse_error("literal edge record needs two ids", at);
            auto a = attribute_handles.find(fields[1]);
            auto l = literals.find(fields[2]);
            if (a == attribute_handles.end() || l == literals.end())
                parse_error("DanglingReference: literal edge " + std::string(fields[1]) + "->" + std::string(fields[2]), at);
            if (l->second.attached) parse_error("literal node " + std::string(fields[2]) + " has two literal edges", at);
            Properties ctx = decode_properties(fields, 3, at);
            guarded(at, [&] { g.add_literal(a->second, l->second.value, std::move(ctx)); });
            l->second.attached = true;
            break;
        }
        }
    }

    for (const auto& [nid, a] : attributes)
        if (!a.attached) parse_error("attribute node " + nid + " has no attribute edge", a.line);
    for (const auto& [nid, l] : literals)
        if (!l.attached) parse_error("literal node " + nid + " has no literal edge", l.line);

    // Composition edges first so strict-mode weak keys are complete when
    // other edges are checked.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& [fields, at] : entity_edges) {
            const auto kind = parse_entity_edge_kind(std::string(fields[3]));
            if (!kind) parse_error("unknown entity edge kind '" + std::string(fields[3]) + "'", at);
            if ((*kind == EntityEdgeKind::Composition) != (pass == 0)) continue;
            auto s = entities.find(fields[1]);
            auto d = entities.find(fields[2]);
            if (s == entities.end() || d == entities.end())
                parse_error("DanglingReference: entity edge " + std::string(fields[1]) + "->" + std::string(fields[2]), at);
            const std::string label = unescape(fields[4]);
            Properties attrs = decode_properties(fields, 5, at);
            guarded(at, [&] { g.add_entity_edge(s->second, d->second, *kind, label, std::move(attrs)); });
        }
    }
    out = std::move(g);
    return true;
}

}  // namespace

std::string encode_value(const Value& v)
{
    std::string out;
    encode_into(out, v);
    return out;
}

Value decode_value(std::string_view text) { return ValueReader(text).read_all(); }

std::string save(const GradGraph& g)
{
    const CanonicalIndex index(g);
    std::map<NodeId, std::string> nid;
    for (const auto* group : {&index.entities(), &index.attributes(), &index.literals()})
        for (NodeId id : *group) nid.emplace(id, "n" + std::to_string(nid.size() + 1));

    std::string body;
    std::size_t records = 0;
    auto record = [&](std::string text) {
        body += text;
        body += '\n';
        ++records;
    };
    for (NodeId id : index.entities()) {
        const auto& node = g.entity(id);
        record("N\t" + nid.at(id) + "\t" + escape_name(node.class_label) + encode_properties(node.identifiers));
    }
    for (NodeId id : index.attributes()) record("A\t" + nid.at(id) + "\t" + escape_name(g.attribute(id).label));
    for (NodeId id : index.literals()) record("L\t" + nid.at(id) + "\t" + encode_value(g.literal(id).value));
    for (EdgeId id : index.entity_edges()) {
        const auto& e = g.entity_edge(id);
        record("E\t" + nid.at(e.start) + "\t" + nid.at(e.end) + "\t" + to_string(e.kind) + "\t" + escape_name(e.label) +
               encode_properties(e.attributes));
    }
    for (EdgeId id : index.attribute_edges()) {
        const auto& e = g.attribute_edge(id);
        record("AE\t" + nid.at(e.start) + "\t" + nid.at(e.end));
    }
    for (EdgeId id : index.literal_edges()) {
        const auto& e = g.literal_edge(id);
        record("LE\t" + nid.at(e.start) + "\t" + nid.at(e.end) + encode_properties(e.context));
    }
    return std::string(kMagic) + "\t" + (g.mode() == GraphMode::Strict ? "strict" : "lax") + "\t" +
           std::to_string(records) + "\n" + body;
}

std::size_t save(const GradGraph& g, std::ostream& sink)
{
    const std::string text = save(g);
    sink.write(text.data(), static_cast<std::streamsize>(text.size()));
    sink.flush();
    if (!sink) throw GradError(ErrorCode::SinkError, "could not write the document");
    return text.size();
}

GradGraph load(std::string_view text)
{
    LineReader reader(text);
    GradGraph g;
    if (!read_document(reader, g)) parse_error("empty input: no grad/1 header", 1);
    std::string_view rest;
    while (reader.next(rest))
        if (!rest.empty()) parse_error("content after the last record", reader.number());
    return g;
}

GradGraph load(std::istream& source)
{
    std::ostringstream buffer;
    buffer << source.rdbuf();
    return load(buffer.str());
}

std::string save(const GraphCollection& c)
{
    std::string out;
    for (const auto& g : c.graphs) out += save(g);
    return out;
}

GraphCollection load_collection(std::string_view text)
{
    LineReader reader(text);
    GraphCollection c;
    GradGraph g;
    while (read_document(reader, g)) c.graphs.push_back(std::move(g));
    return c;
}

}  // namespace grad
