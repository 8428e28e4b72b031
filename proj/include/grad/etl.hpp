#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grad/graph.hpp"

namespace grad {

enum class ColumnType { Integer, Decimal, Text, Boolean };

struct Column {
    std::string name;
    ColumnType type = ColumnType::Text;
};

/// Typed rows of one delimited file. Empty cells are nullopt.
struct SourceTable {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<std::optional<Value>>> rows;
    /// Source line of each row, for diagnostics.
    std::vector<std::size_t> row_lines;

    std::optional<std::size_t> column_index(const std::string& name) const;
};

/// Splits `text` on `delimiter` and coerces each cell to its declared
/// column type. Throws MappingError on arity mismatch and TypeCoercionError
/// on malformed numbers or booleans.
SourceTable parse_table(const std::string& name, const std::string& text, char delimiter, bool header,
                        const std::vector<Column>& columns);

/// A cell reference or a typed constant (anything with a `x:` type tag).
struct CellSource {
    std::string column;
    std::optional<Value> constant;
};

struct EntityMapping {
    std::string var;
    std::string class_label;
    std::vector<std::pair<std::string, CellSource>> identifiers;
};

struct AttributeMapping {
    std::string entity_var;
    std::string label;
    CellSource value;
    std::vector<std::pair<std::string, CellSource>> context;
};

struct EdgeMapping {
    std::string start_var;
    std::string end_var;
    EntityEdgeKind kind = EntityEdgeKind::Association;
    std::string label;
    std::vector<std::pair<std::string, CellSource>> attributes;
};

struct TableMapping {
    std::string name;
    std::filesystem::path file;
    char delimiter = '\t';
    bool header = false;
    std::vector<Column> columns;
    std::vector<EntityMapping> entities;
    std::vector<AttributeMapping> attributes;
    std::vector<EdgeMapping> edges;
};

/// Plain property graph: labeled nodes and edges with flat properties.
struct PropertyGraph {
    struct Node {
        std::string id;
        std::string label;
        Properties properties;
    };
    struct Edge {
        std::string start;
        std::string end;
        std::string label;
        Properties properties;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges;
};

struct PropertyGraphMapping {
    std::filesystem::path file;
    /// label -> property names that identify nodes of that label.
    std::map<std::string, std::vector<std::string>> identifiers;
};

struct EtlMapping {
    std::vector<TableMapping> tables;
    std::vector<PropertyGraphMapping> property_graphs;
};

/// Mapping file:
///
///   table movies
///     file movies.dat
///     delimiter tab            # tab | comma | semicolon | pipe | one character
///     header yes
///     column imdb int          # int | float | string | bool
///     entity m MOVIE IMDB_ID=imdb RT_ID=rt
///     attribute m Rating rating Type=s:Audience
///     edge m a Association ACTS ranking=rank
///
///   property-graph dump.json
///     identifiers MOVIE IMDB_ID RT_ID
///
/// Relative file paths are resolved against `base_dir`.
EtlMapping parse_mapping(std::string_view text, const std::filesystem::path& base_dir);

/// Builds one fragment per row and folds it into the result by identity, so
/// rows about one entity land in one hypernode. Throws MappingError for
/// empty identifier cells and unknown columns or variables.
GradGraph etl(const std::vector<SourceTable>& tables, const EtlMapping& mapping);

/// Reads every table and property-graph file named by the mapping and runs
/// the load.
GradGraph etl_from_files(const EtlMapping& mapping);

/// Lifts a property graph: identifier properties become entity identifiers,
/// the remaining properties become attribute nodes with one literal each,
/// and edges become Association edges. Nodes with equal keys merge.
GradGraph lift_property_graph(const PropertyGraph& pg, const std::map<std::string, std::vector<std::string>>& identifiers);

/// {"nodes":[{"id","label","properties"}], "edges":[{"start","end","label","properties"}]}
PropertyGraph parse_property_graph_json(const std::string& text);

}  // namespace grad
