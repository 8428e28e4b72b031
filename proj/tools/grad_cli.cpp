// grad: batch front end over the GRAD library.
//
// Exit codes: 0 success, 1 constraint errors (and load failures), 2 usage
// or input errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "grad/algebra.hpp"
#include "grad/constraints.hpp"
#include "grad/etl.hpp"
#include "grad/identity.hpp"
#include "grad/io.hpp"
#include "grad/matcher.hpp"
#include "grad/text_format.hpp"

namespace fs = std::filesystem;
using namespace grad;

namespace {

constexpr int kOk = 0;
constexpr int kConstraint = 1;
constexpr int kInput = 2;

struct Options {
    bool strict = false;
    bool merge = false;
    bool global_edge_labels = false;
    std::size_t max_matches = 10000;
    std::string out;
};

/// Failure with a chosen exit code.
struct Exit {
    int code;
};

GradGraph read_graph(const std::string& path)
{
    try {
        return load(read_file(path));
    } catch (const GradError& err) {
        throw GradError(err.code(), path + ": " + err.what(), err.line());
    }
}

GraphCollection read_collection(const std::string& path)
{
    try {
        return load_collection(read_file(path));
    } catch (const GradError& err) {
        throw GradError(err.code(), path + ": " + err.what(), err.line());
    }
}

GraphPattern read_pattern(const std::string& path)
{
    try {
        return parse_pattern(read_file(path));
    } catch (const GradError& err) {
        throw GradError(err.code(), path + ": " + err.what(), err.line());
    }
}

void emit(const Options& opt, const std::string& text)
{
    if (opt.out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw GradError(ErrorCode::SinkError, "cannot write to standard output");
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    file << text;
    file.close();
    if (!file) throw GradError(ErrorCode::SinkError, "cannot write " + opt.out);
}

void report(const std::vector<Violation>& violations, std::ostream& os)
{
    for (const auto& v : violations) {
        os << to_string(v.severity) << '\t' << to_string(v.rule) << '\t';
        for (std::size_t i = 0; i < v.elements.size(); ++i) os << (i ? ";" : "") << v.elements[i];
        if (!v.detail.empty()) os << '\t' << v.detail;
        os << '\n';
    }
}

/// Under --strict, outputs must satisfy entity integrity and are tagged strict.
void finish(const Options& opt, GradGraph& g)
{
    if (!opt.strict) return;
    const auto issues = check_entity_integrity(g, {opt.global_edge_labels});
    std::vector<Violation> errors;
    for (const auto& v : issues)
        if (v.severity == Severity::Error) errors.push_back(v);
    if (!errors.empty()) {
        std::cerr << "strict mode: output violates entity integrity\n";
        report(errors, std::cerr);
        throw Exit{kConstraint};
    }
    g.set_mode(GraphMode::Strict);
}

void emit_graph(const Options& opt, GradGraph g)
{
    finish(opt, g);
    emit(opt, save(g));
}

void emit_collection(const Options& opt, GraphCollection c)
{
    for (auto& g : c.graphs) finish(opt, g);
    emit(opt, save(c));
}

std::string summary(const GradGraph& g)
{
    return "entities=" + std::to_string(g.entity_nodes().size()) + " attributes=" + std::to_string(g.attribute_nodes().size()) +
           " literals=" + std::to_string(g.literal_nodes().size()) + " edges=" + std::to_string(g.edge_count());
}

int cmd_load(const Options& opt, const std::string& mapping_path)
{
    GradGraph g;
    try {
        const EtlMapping mapping = parse_mapping(read_file(mapping_path), fs::path(mapping_path).parent_path());
        g = etl_from_files(mapping);
    } catch (const GradError& err) {
        std::cerr << "grad load: " << mapping_path << ": " << err.what() << '\n';
        return kConstraint;
    }
    emit_graph(opt, g);
    std::cerr << summary(g) << '\n';
    return kOk;
}

int cmd_validate(const Options& opt, const std::string& graph_path, const std::string& constraints_path)
{
    const GradGraph g = read_graph(graph_path);
    ConstraintSet constraints;
    if (!constraints_path.empty()) {
        try {
            constraints = parse_constraints(read_file(constraints_path), fs::path(constraints_path).parent_path());
        } catch (const GradError& err) {
            throw GradError(err.code(), constraints_path + ": " + err.what(), err.line());
        }
    }
    const ValidationReport r = validate(g, constraints.assertions, constraints.multiplicities, {opt.global_edge_labels});
    std::ostringstream os;
    report(r.violations, os);
    emit(opt, os.str());
    std::cerr << "errors=" << r.errors << " warnings=" << r.warnings << '\n';
    return r.ok() ? kOk : kConstraint;
}

std::string describe(const GradGraph& g, NodeId id)
{
    switch (*g.kind_of(id)) {
    case NodeKind::Entity:
    case NodeKind::Attribute: return ordering_key(g, id).to_string();
    case NodeKind::Literal: return encode_value(g.literal(id).value);
    }
    return {};
}

std::string describe(const GradGraph& g, EdgeId id)
{
    switch (*g.kind_of(id)) {
    case EdgeKind::Entity: return ordering_key(g, id).to_string();
    case EdgeKind::Attribute: return ordering_key(g, g.attribute_edge(id).end).to_string();
    case EdgeKind::Literal: {
        std::string out = "{";
        for (const auto& [name, value] : g.literal_edge(id).context)
            out += (out.size() > 1 ? "," : "") + name + "=" + encode_value(value);
        return out + "}";
    }
    }
    return {};
}

int cmd_match(const Options& opt, const std::string& graph_path, const std::string& pattern_path)
{
    const GradGraph g = read_graph(graph_path);
    const GraphPattern p = read_pattern(pattern_path);
    const MatchSet ms = match(g, p, {opt.max_matches});

    std::ostringstream os;
    std::vector<std::string> header;
    for (const auto& n : p.nodes) header.push_back(n.var);
    for (const auto& e : p.edges)
        if (!e.var.empty()) header.push_back(e.var);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "\t" : "") << header[i];
    os << '\n';
    for (const auto& m : ms.matches) {
        bool first = true;
        for (const auto& n : p.nodes) {
            os << (first ? "" : "\t") << describe(g, m.nodes.at(n.var));
            first = false;
        }
        for (std::size_t j = 0; j < p.edges.size(); ++j)
            if (!p.edges[j].var.empty()) {
                os << (first ? "" : "\t") << describe(g, m.edges[j]);
                first = false;
            }
        os << '\n';
    }
    emit(opt, os.str());
    std::cerr << "matches=" << ms.size() << '\n';
    return kOk;
}

int cmd_select(const Options& opt, const std::string& graph_path, const std::string& pattern_path)
{
    const GradGraph g = read_graph(graph_path);
    GraphCollection c = selection(g, read_pattern(pattern_path), {opt.max_matches});
    std::cerr << "graphs=" << c.size() << '\n';
    if (!opt.merge) {
        emit_collection(opt, std::move(c));
        return kOk;
    }
    GradGraph merged;
    GraphIntegrator integrator(merged);
    for (const auto& member : c.graphs) integrator.fold(member);
    emit_graph(opt, std::move(merged));
    return kOk;
}

int cmd_compose(const Options& opt, const std::string& graph_path, const std::string& pattern_path,
                const std::string& template_path)
{
    const GradGraph g = read_graph(graph_path);
    GraphTemplate t;
    try {
        t = parse_template(read_file(template_path));
    } catch (const GradError& err) {
        throw GradError(err.code(), template_path + ": " + err.what(), err.line());
    }
    GradGraph out = composition(g, read_pattern(pattern_path), t, {opt.max_matches});
    std::cerr << summary(out) << '\n';
    emit_graph(opt, std::move(out));
    return kOk;
}

int cmd_binary(const Options& opt, const std::string& verb, const std::string& left, const std::string& right,
               const std::string& predicate_path)
{
    if (verb == "union" || verb == "diff") {
        const GradGraph g = read_graph(left);
        const GradGraph h = read_graph(right);
        GradGraph out = verb == "union" ? graph_union(g, h) : difference(g, h);
        std::cerr << summary(out) << '\n';
        emit_graph(opt, std::move(out));
        return kOk;
    }
    const GraphCollection s1 = read_collection(left);
    const GraphCollection s2 = read_collection(right);
    GraphCollection out;
    if (verb == "product") {
        out = cartesian_product(s1, s2);
    } else {
        JoinPredicate pr;
        try {
            pr = parse_join_predicate(read_file(predicate_path));
        } catch (const GradError& err) {
            throw GradError(err.code(), predicate_path + ": " + err.what(), err.line());
        }
        std::vector<std::string> warnings;
        out = join(s1, s2, pr, &warnings);
        for (const auto& w : warnings) std::cerr << "warning\t" << w << '\n';
    }
    std::cerr << "graphs=" << out.size() << '\n';
    emit_collection(opt, std::move(out));
    return kOk;
}

int cmd_stats(const Options& opt, const std::string& graph_path)
{
    const GradGraph g = read_graph(graph_path);
    std::ostringstream os;
    os << "entity_nodes\t" << g.entity_nodes().size() << '\n'
       << "attribute_nodes\t" << g.attribute_nodes().size() << '\n'
       << "literal_nodes\t" << g.literal_nodes().size() << '\n'
       << "entity_edges\t" << g.entity_edges().size() << '\n'
       << "attribute_edges\t" << g.attribute_edges().size() << '\n'
       << "literal_edges\t" << g.literal_edges().size() << '\n';
    const ClassRegistry reg = class_registry(g);
    for (const auto& [cls, members] : reg.classes) os << "class\t" << cls << '\t' << members.size() << '\n';
    for (const auto& label : reg.attribute_labels) os << "attribute_label\t" << label << '\n';
    emit(opt, os.str());
    return kOk;
}

int cmd_export(const Options& opt, const std::string& graph_path, const std::string& format)
{
    const GradGraph g = read_graph(graph_path);
    emit(opt, format == "dot" ? to_dot(g) : to_json(g));
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Batch front end for GRAD graphs", "grad"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_flag("--strict", opt.strict, "Outputs must satisfy entity integrity; documents are tagged strict");
    app.add_flag("--merge", opt.merge, "select: merge the matched subgraphs into one document");
    app.add_flag("--global-edge-labels", opt.global_edge_labels, "One class pair per edge label across the whole graph");
    app.add_option("--max-matches", opt.max_matches, "Fail when a query yields more matches (0 = unlimited)")->capture_default_str();
    app.add_option("--out", opt.out, "Write the result here instead of standard output");

    std::string graph, pattern, templ, constraints, mapping, left, right, predicate, format = "json";

    auto* load_cmd = app.add_subcommand("load", "Build a graph from delimited tables via a mapping file");
    load_cmd->add_option("mapping", mapping, "Mapping file")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Check entity integrity, assertions and multiplicities");
    validate_cmd->add_option("graph", graph, "grad/1 document")->required();
    validate_cmd->add_option("constraints", constraints, "Constraint file");

    auto* match_cmd = app.add_subcommand("match", "Print the binding table of a pattern");
    auto* select_cmd = app.add_subcommand("select", "Extract the matched subgraphs");
    for (auto* cmd : {match_cmd, select_cmd}) {
        cmd->add_option("graph", graph, "grad/1 document")->required();
        cmd->add_option("pattern", pattern, "Pattern file")->required();
    }
    auto* compose_cmd = app.add_subcommand("compose", "Instantiate a template for every match");
    compose_cmd->add_option("graph", graph, "grad/1 document")->required();
    compose_cmd->add_option("pattern", pattern, "Pattern file")->required();
    compose_cmd->add_option("template", templ, "Template file")->required();

    std::vector<CLI::App*> binaries;
    for (const char* verb : {"union", "diff", "product", "join"}) {
        auto* cmd = app.add_subcommand(verb, std::string(verb) + " of two inputs");
        cmd->add_option("left", left, "Left input")->required();
        cmd->add_option("right", right, "Right input")->required();
        if (std::string(verb) == "join") cmd->add_option("predicate", predicate, "Join predicate file")->required();
        binaries.push_back(cmd);
    }

    auto* stats_cmd = app.add_subcommand("stats", "Element counts per partition and class");
    stats_cmd->add_option("graph", graph, "grad/1 document")->required();
    auto* export_cmd = app.add_subcommand("export", "Render a graph as JSON or Graphviz dot");
    export_cmd->add_option("graph", graph, "grad/1 document")->required();
    export_cmd->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*load_cmd) return cmd_load(opt, mapping);
        if (*validate_cmd) return cmd_validate(opt, graph, constraints);
        if (*match_cmd) return cmd_match(opt, graph, pattern);
        if (*select_cmd) return cmd_select(opt, graph, pattern);
        if (*compose_cmd) return cmd_compose(opt, graph, pattern, templ);
        for (auto* cmd : binaries)
            if (*cmd) return cmd_binary(opt, cmd->get_name(), left, right, predicate);
        if (*stats_cmd) return cmd_stats(opt, graph);
        if (*export_cmd) return cmd_export(opt, graph, format);
    } catch (const Exit& e) {
        return e.code;
    } catch (const GradError& err) {
        std::cerr << "grad " << app.get_subcommands().front()->get_name() << ": " << err.what() << '\n';
        return kInput;
    } catch (const std::exception& err) {
        std::cerr << "grad: " << err.what() << '\n';
        return kInput;
    }
    return kInput;
}
