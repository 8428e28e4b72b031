#include "grad/etl.hpp"

#include <charconv>
#include <json.hpp>
#include <set>

#include "grad/algebra.hpp"
#include "grad/io.hpp"
#include "grad/text_format.hpp"

namespace grad {

namespace {

[[noreturn]] void mapping_error(const std::string& what, std::size_t line = 0)
{
    throw GradError(ErrorCode::MappingError, line ? "line " + std::to_string(line) + ": " + what : what, line);
}

[[noreturn]] void syntax_error(const std::string& what, std::size_t line)
{
    throw GradError(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what, line);
}

const char* type_name(ColumnType t)
{
    switch (t) {
    case ColumnType::Integer: return "int";
    case ColumnType::Decimal: return "float";
    case ColumnType::Text: return "string";
    case ColumnType::Boolean: return "bool";
    }
    return "?";
}

std::optional<Value> coerce(std::string_view cell, ColumnType type)
{
    if (cell.empty()) return std::nullopt;
    switch (type) {
    case ColumnType::Text: return Value(std::string(cell));
    case ColumnType::Integer: {
        std::int64_t x = 0;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) throw std::invalid_argument("int");
        return Value(x);
    }
    case ColumnType::Decimal: {
        double x = 0;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || x != x) throw std::invalid_argument("float");
        return Value(x);
    }
    case ColumnType::Boolean:
        if (cell == "true" || cell == "1" || cell == "yes") return Value(true);
        if (cell == "false" || cell == "0" || cell == "no") return Value(false);
        throw std::invalid_argument("bool");
    }
    return std::nullopt;
}

CellSource cell_source(const std::string& token)
{
    if (token.size() >= 2 && token[1] == ':' && std::string_view("sifbc").find(token[0]) != std::string_view::npos)
        return {{}, decode_value(token)};
    return {token, std::nullopt};
}

std::vector<std::pair<std::string, CellSource>> named_sources(const std::vector<std::string>& t, std::size_t first,
                                                              std::size_t line)
{
    std::vector<std::pair<std::string, CellSource>> out;
    for (std::size_t i = first; i < t.size(); ++i) {
        const std::size_t eq = t[i].find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == t[i].size()) syntax_error("expected name=column, got '" + t[i] + "'", line);
        try {
            out.emplace_back(t[i].substr(0, eq), cell_source(t[i].substr(eq + 1)));
        } catch (const GradError& err) {
            syntax_error(err.what(), line);
        }
    }
    return out;
}

/// Checks that every column and variable a table mapping refers to exists.
void check_table(const TableMapping& tm, std::size_t line)
{
    std::set<std::string> columns;
    for (const auto& c : tm.columns)
        if (!columns.insert(c.name).second) mapping_error("table " + tm.name + " declares column " + c.name + " twice", line);
    auto column = [&](const CellSource& src) {
        if (!src.constant && !columns.count(src.column)) mapping_error("table " + tm.name + " has no column '" + src.column + "'", line);
    };
    std::set<std::string> vars;
    for (const auto& e : tm.entities) {
        if (!vars.insert(e.var).second) mapping_error("table " + tm.name + " maps entity variable " + e.var + " twice", line);
        if (e.identifiers.empty()) mapping_error("entity " + e.var + " in table " + tm.name + " has no identifier columns", line);
        for (const auto& [_, src] : e.identifiers) column(src);
    }
    for (const auto& a : tm.attributes) {
        if (!vars.count(a.entity_var)) mapping_error("attribute " + a.label + " refers to unknown entity variable " + a.entity_var, line);
        column(a.value);
        for (const auto& [_, src] : a.context) column(src);
    }
    for (const auto& e : tm.edges) {
        if (!vars.count(e.start_var) || !vars.count(e.end_var))
            mapping_error("edge " + e.label + " refers to an unknown entity variable", line);
        for (const auto& [_, src] : e.attributes) column(src);
    }
}

const std::optional<Value>& cell(const SourceTable& table, std::size_t row, const CellSource& src)
{
    if (src.constant) return src.constant;
    return table.rows[row][*table.column_index(src.column)];
}

GradGraph fragment(const SourceTable& table, const TableMapping& tm, std::size_t row)
{
    const std::size_t line = table.row_lines[row];
    const std::string where = "table " + table.name + " line " + std::to_string(line);
    GradGraph g;
    std::map<std::string, NodeId> nodes;
    for (const auto& e : tm.entities) {
        Identifiers ids;
        for (const auto& [name, src] : e.identifiers) {
            const auto& v = cell(table, row, src);
            if (!v) mapping_error(where + ": identifier " + name + " of " + e.class_label + " is empty", line);
            ids.emplace(name, *v);
        }
        nodes[e.var] = g.add_entity_node(e.class_label, std::move(ids));
    }
    for (const auto& a : tm.attributes) {
        const auto& v = cell(table, row, a.value);
        if (!v) continue;
        Properties ctx;
        for (const auto& [name, src] : a.context)
            if (const auto& c = cell(table, row, src)) ctx.emplace(name, *c);
        g.add_literal(g.add_attribute(nodes.at(a.entity_var), a.label), *v, std::move(ctx));
    }
    // Composition first so weak keys are in place before anything else.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : tm.edges) {
            if ((e.kind == EntityEdgeKind::Composition) != (pass == 0)) continue;
            Properties attrs;
            for (const auto& [name, src] : e.attributes)
                if (const auto& c = cell(table, row, src)) attrs.emplace(name, *c);
            try {
                g.add_entity_edge(nodes.at(e.start_var), nodes.at(e.end_var), e.kind, e.label, std::move(attrs));
            } catch (const GradError& err) {
                mapping_error(where + ": " + err.what(), line);
            }
        }
    }
    return g;
}

Value json_value(const nlohmann::json& j, const std::string& where)
{
    if (j.is_boolean()) return Value(j.get<bool>());
    if (j.is_number_integer()) return Value(j.get<std::int64_t>());
    if (j.is_number_float()) return Value(j.get<double>());
    if (j.is_string()) return Value(j.get<std::string>());
    if (j.is_array() && !j.empty()) {
        Value::Composite parts;
        for (const auto& x : j) parts.push_back(json_value(x, where));
        return Value::composite(std::move(parts));
    }
    mapping_error(where + ": unsupported property value " + j.dump());
}

Properties json_properties(const nlohmann::json& j, const std::string& where)
{
    Properties out;
    if (j.is_null()) return out;
    if (!j.is_object()) mapping_error(where + ": properties must be an object");
    for (const auto& [name, value] : j.items()) out.emplace(name, json_value(value, where));
    return out;
}

}  // namespace

std::optional<std::size_t> SourceTable::column_index(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    return std::nullopt;
}

SourceTable parse_table(const std::string& name, const std::string& text, char delimiter, bool header,
                        const std::vector<Column>& columns)
{
    SourceTable table{name, columns, {}, {}};
    std::size_t pos = 0;
    std::size_t number = 0;
    bool skipped_header = !header;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        ++number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }

        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t d = line.find(delimiter, start);
            cells.push_back(line.substr(start, d == std::string_view::npos ? std::string_view::npos : d - start));
            if (d == std::string_view::npos) break;
            start = d + 1;
        }
        if (cells.size() != columns.size())
            mapping_error("table " + name + " line " + std::to_string(number) + ": expected " + std::to_string(columns.size()) +
                              " cells, got " + std::to_string(cells.size()),
                          number);

        std::vector<std::optional<Value>> row;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                row.push_back(coerce(cells[i], columns[i].type));
            } catch (const std::invalid_argument&) {
                throw GradError(ErrorCode::TypeCoercionError,
                                "table " + name + " line " + std::to_string(number) + " column " + columns[i].name + ": '" +
                                    std::string(cells[i]) + "' is not a valid " + type_name(columns[i].type),
                                number);
            }
        }
        table.rows.push_back(std::move(row));
        table.row_lines.push_back(number);
    }
    return table;
}

EtlMapping parse_mapping(std::string_view text, const std::filesystem::path& base_dir)
{
    EtlMapping m;
    enum { None, Table, Graph } section = None;
    std::vector<std::size_t> table_lines;

    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++number;
        const auto t = tokenize(raw, number);
        if (t.empty()) continue;
        const std::string& head = t[0];

        if (head == "table") {
            if (t.size() != 2) syntax_error("table needs a name", number);
            m.tables.push_back({});
            m.tables.back().name = t[1];
            table_lines.push_back(number);
            section = Table;
            continue;
        }
        if (head == "property-graph") {
            if (t.size() != 2) syntax_error("property-graph needs a file", number);
            m.property_graphs.push_back({base_dir / t[1], {}});
            section = Graph;
            continue;
        }
        if (section == Graph) {
            if (head != "identifiers" || t.size() < 3) syntax_error("expected 'identifiers LABEL name...'", number);
            m.property_graphs.back().identifiers[t[1]] = std::vector<std::string>(t.begin() + 2, t.end());
            continue;
        }
        if (section == None) syntax_error("expected 'table NAME' or 'property-graph FILE'", number);

        TableMapping& tm = m.tables.back();
        if (head == "file") {
            if (t.size() != 2) syntax_error("file needs a path", number);
            tm.file = base_dir / t[1];
        } else if (head == "delimiter") {
            if (t.size() != 2) syntax_error("delimiter needs a value", number);
            const std::string& d = t[1];
            if (d == "tab") tm.delimiter = '\t';
            else if (d == "comma") tm.delimiter = ',';
            else if (d == "semicolon") tm.delimiter = ';';
            else if (d == "pipe") tm.delimiter = '|';
            else if (d == "space") tm.delimiter = ' ';
            else if (d.size() == 1) tm.delimiter = d[0];
            else syntax_error("unknown delimiter '" + d + "'", number);
        } else if (head == "header") {
            if (t.size() != 2 || (t[1] != "yes" && t[1] != "no")) syntax_error("header is 'yes' or 'no'", number);
            tm.header = t[1] == "yes";
        } else if (head == "column") {
            if (t.size() != 3) syntax_error("column needs a name and a type", number);
            ColumnType type;
            if (t[2] == "int") type = ColumnType::Integer;
            else if (t[2] == "float") type = ColumnType::Decimal;
            else if (t[2] == "string") type = ColumnType::Text;
            else if (t[2] == "bool") type = ColumnType::Boolean;
            else syntax_error("unknown column type '" + t[2] + "'", number);
            tm.columns.push_back({t[1], type});
        } else if (head == "entity") {
            if (t.size() < 4) syntax_error("entity needs a variable, a class and identifier columns", number);
            tm.entities.push_back({t[1], t[2], named_sources(t, 3, number)});
        } else if (head == "attribute") {
            if (t.size() < 4) syntax_error("attribute needs an entity variable, a label and a value column", number);
            AttributeMapping a;
            a.entity_var = t[1];
            a.label = t[2];
            try {
                a.value = cell_source(t[3]);
            } catch (const GradError& err) {
                syntax_error(err.what(), number);
            }
            a.context = named_sources(t, 4, number);
            tm.attributes.push_back(std::move(a));
        } else if (head == "edge") {
            if (t.size() < 5) syntax_error("edge needs two entity variables, a kind and a label", number);
            auto kind = parse_entity_edge_kind(t[3]);
            if (!kind) syntax_error("unknown entity edge kind '" + t[3] + "'", number);
            tm.edges.push_back({t[1], t[2], *kind, t[4], named_sources(t, 5, number)});
        } else {
            syntax_error("unknown mapping directive '" + head + "'", number);
        }
    }
    for (std::size_t i = 0; i < m.tables.size(); ++i) {
        if (m.tables[i].file.empty()) mapping_error("table " + m.tables[i].name + " names no file", table_lines[i]);
        check_table(m.tables[i], table_lines[i]);
    }
    return m;
}

GradGraph etl(const std::vector<SourceTable>& tables, const EtlMapping& mapping)
{
    GradGraph out;
    GraphIntegrator integrator(out);
    for (const auto& tm : mapping.tables) {
        check_table(tm, 0);
        const SourceTable* table = nullptr;
        for (const auto& t : tables)
            if (t.name == tm.name) table = &t;
        if (!table) mapping_error("no source table named " + tm.name);
        for (const auto& c : tm.columns)
            if (!table->column_index(c.name)) mapping_error("source table " + tm.name + " lacks column " + c.name);
        for (std::size_t row = 0; row < table->rows.size(); ++row) {
            const GradGraph piece = fragment(*table, tm, row);
            try {
                integrator.fold(piece);
            } catch (const GradError& err) {
                const std::size_t line = table->row_lines[row];
                throw GradError(ErrorCode::MappingError,
                                "table " + tm.name + " line " + std::to_string(line) + ": " + err.what(), line);
            }
        }
    }
    return out;
}

GradGraph etl_from_files(const EtlMapping& mapping)
{
    std::vector<SourceTable> tables;
    for (const auto& tm : mapping.tables) {
        std::string text;
        try {
            text = read_file(tm.file);
        } catch (const GradError&) {
            mapping_error("cannot read table file " + tm.file.string());
        }
        tables.push_back(parse_table(tm.name, text, tm.delimiter, tm.header, tm.columns));
    }
    GradGraph out = etl(tables, mapping);
    GraphIntegrator integrator(out);
    for (const auto& pgm : mapping.property_graphs) {
        std::string text;
        try {
            text = read_file(pgm.file);
        } catch (const GradError&) {
            mapping_error("cannot read property graph file " + pgm.file.string());
        }
        integrator.fold(lift_property_graph(parse_property_graph_json(text), pgm.identifiers));
    }
    return out;
}

GradGraph lift_property_graph(const PropertyGraph& pg, const std::map<std::string, std::vector<std::string>>& identifiers)
{
    GradGraph raw;
    std::map<std::string, NodeId> nodes;
    for (const auto& n : pg.nodes) {
        auto spec = identifiers.find(n.label);
        if (spec == identifiers.end()) mapping_error("no identifier properties declared for label " + n.label);
        Identifiers ids;
        for (const auto& name : spec->second) {
            auto it = n.properties.find(name);
            if (it == n.properties.end()) mapping_error("node " + n.id + " lacks identifier property " + name);
            ids.emplace(name, it->second);
        }
        if (!nodes.emplace(n.id, raw.add_entity_node(n.label, ids)).second) mapping_error("node id " + n.id + " appears twice");
        const NodeId entity = nodes.at(n.id);
        for (const auto& [name, value] : n.properties)
            if (!ids.count(name)) raw.add_literal(raw.add_attribute(entity, name), value);
    }
    for (const auto& e : pg.edges) {
        auto s = nodes.find(e.start);
        auto d = nodes.find(e.end);
        if (s == nodes.end() || d == nodes.end()) mapping_error("edge " + e.label + " references an unknown node");
        raw.add_entity_edge(s->second, d->second, EntityEdgeKind::Association, e.label, e.properties);
    }
    GradGraph out;
    GraphIntegrator(out).fold(raw);
    return out;
}

PropertyGraph parse_property_graph_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw GradError(ErrorCode::ParseError, std::string("property graph: ") + err.what());
    }
    PropertyGraph pg;
    try {
        for (const auto& n : doc.at("nodes"))
            pg.nodes.push_back({n.at("id").get<std::string>(), n.at("label").get<std::string>(),
                                json_properties(n.value("properties", nlohmann::json()), "node " + n.at("id").get<std::string>())});
        if (doc.contains("edges"))
            for (const auto& e : doc.at("edges"))
                pg.edges.push_back({e.at("start").get<std::string>(), e.at("end").get<std::string>(), e.at("label").get<std::string>(),
                                    json_properties(e.value("properties", nlohmann::json()), "edge " + e.at("label").get<std::string>())});
    } catch (const nlohmann::json::exception& err) {
        throw GradError(ErrorCode::ParseError, std::string("property graph: ") + err.what());
    }
    return pg;
}

}  // namespace grad
