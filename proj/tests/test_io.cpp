#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "grad/error.hpp"
#include "grad/etl.hpp"
#include "grad/io.hpp"
#include "grad/text_format.hpp"

using namespace grad;
using namespace grad::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const GradError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no GradError thrown";
    return ErrorCode::StructuralViolation;
}

std::size_t records(const std::string& doc)
{
    std::size_t n = 0;
    for (char c : doc)
        if (c == '\n') ++n;
    return n - 1;
}

std::size_t records_of(const std::string& doc, const std::string& tag)
{
    std::istringstream in(doc);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
        if (line.rfind(tag + "\t", 0) == 0) ++n;
    return n;
}

GradGraph load_example8() { return etl_from_files(parse_mapping(read_file(data_dir() / "example8/movielens.map"), data_dir() / "example8")); }

std::vector<Column> rating_columns()
{
    return {{"imdbID", ColumnType::Integer}, {"rtID", ColumnType::Text}, {"type", ColumnType::Text}, {"value", ColumnType::Decimal}};
}

EtlMapping rating_mapping()
{
    TableMapping t;
    t.name = "ratings";
    t.columns = rating_columns();
    t.entities = {{"m", "MOVIE", {{"IMDB_ID", {"imdbID", {}}}, {"RT_ID", {"rtID", {}}}}}};
    t.attributes = {{"m", "Rating", {"value", {}}, {{"Type", {"type", {}}}}}};
    EtlMapping m;
    m.tables.push_back(t);
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// grad/1 documents

TEST(Serialize, EmptyGraphIsHeaderOnly)
{
    EXPECT_EQ(save(GradGraph{}), "grad/1\tlax\t0\n");
    EXPECT_EQ(save(GradGraph{GraphMode::Strict}), "grad/1\tstrict\t0\n");
    EXPECT_TRUE(load("grad/1\tlax\t0\n").empty());
    EXPECT_EQ(save(load(read_file(data_dir() / "empty.grad"))), "grad/1\tlax\t0\n");
}

TEST(Serialize, HandWrittenDocument)
{
    GradGraph g;
    const NodeId m = g.add_entity_node("MOVIE", {{"IMDB_ID", 3884}});
    const NodeId a = g.add_entity_node("ACTOR", {{"ActorName", "Eric Bana"}});
    g.add_entity_edge(m, a, EntityEdgeKind::Association, "ACTS", {{"ranking", 1}});
    g.add_literal(g.add_attribute(m, "Rating"), 8.5, {{"Type", "Audience"}});
    const std::string expected =
        "grad/1\tlax\t7\n"
        "N\tn1\tACTOR\tActorName=s:Eric Bana\n"
        "N\tn2\tMOVIE\tIMDB_ID=i:3884\n"
        "A\tn3\tRating\n"
        "L\tn4\tf:8.5\n"
        "E\tn2\tn1\tAssociation\tACTS\tranking=i:1\n"
        "AE\tn2\tn3\n"
        "LE\tn3\tn4\tType=s:Audience\n";
    EXPECT_EQ(save(g), expected);
    EXPECT_EQ(save(load(expected)), expected);
}

TEST(Serialize, ExampleRecordCounts)
{
    const std::string doc = save(movielens().g);
    EXPECT_EQ(records(doc), 15u);
    EXPECT_EQ(records_of(doc, "N") + records_of(doc, "A") + records_of(doc, "L"), 8u);
    EXPECT_EQ(records_of(doc, "E") + records_of(doc, "AE") + records_of(doc, "LE"), 7u);
    EXPECT_EQ(doc, read_file(data_dir() / "example8.grad"));
}

TEST(Serialize, RoundTripIsByteIdentical)
{
    Rng rng(0x10ad);
    for (int i = 0; i < 100; ++i) {
        const auto g = random_graph(rng);
        const std::string doc = save(g);
        const auto back = load(doc);
        EXPECT_EQ(back.node_count(), g.node_count());
        EXPECT_EQ(back.edge_count(), g.edge_count());
        EXPECT_EQ(save(back), doc);
    }
}

TEST(Serialize, ValueEncodings)
{
    const std::vector<Value> values{Value(0), Value(-12), Value(8.5), Value(1e-300), Value(true), Value(false),
                                    Value("tab\there"), Value("back\\slash"), Value("new\nline"), Value(""),
                                    Value("ÿnicode ✓"),
                                    Value::composite({Value(1), Value("x,y"), Value::composite({Value(2.25)})})};
    for (const auto& v : values) {
        const std::string enc = encode_value(v);
        EXPECT_EQ(enc.find('\t'), std::string::npos) << enc;
        EXPECT_EQ(enc.find('\n'), std::string::npos) << enc;
        EXPECT_EQ(decode_value(enc), v) << enc;
    }
    EXPECT_EQ(encode_value(Value(3884)), "i:3884");
    EXPECT_EQ(encode_value(Value(8.5)), "f:8.5");
    EXPECT_EQ(encode_value(Value(true)), "b:true");
}

TEST(Serialize, DecimalsSurviveExactly)
{
    Rng rng(0xf10a7);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = d(rng);
        EXPECT_EQ(decode_value(encode_value(Value(x))).as_double(), x);
    }
}

TEST(Serialize, CollectionsConcatenateDocuments)
{
    GraphCollection c;
    c.graphs.push_back(movielens().g);
    c.graphs.emplace_back();
    c.graphs.push_back(two_movies());
    const auto back = load_collection(save(c));
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(save(back.graphs[i]), save(c.graphs[i]));
    EXPECT_TRUE(load_collection("").empty());
}

TEST(Serialize, MalformedDocuments)
{
    const std::string head = "grad/1\tlax\t1\n";
    EXPECT_EQ(code_of([&] { load(head + "N\tn1\tMOVIE\tIMDB_ID=x:1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load(head + "N\tn1\tMOVIE\tIMDB_ID=3884\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load("grad/2\tlax\t0\n"); }), ErrorCode::UnsupportedVersion);
    EXPECT_EQ(code_of([&] { load(""); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load("grad/1\tlax\t2\nN\tn1\tA\tk=i:1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load("grad/1\tlax\t1\nN\tn1\tA\tk=f:nan\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load("grad/1\tlax\t2\nN\tn1\tA\tk=i:1\nN\tn1\tA\tk=i:2\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load("grad/1\tlax\t2\nE\tn1\tn1\tAssociation\tR\nN\tn1\tA\tk=i:1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { load("grad/1\tlax\t1\nA\tn1\tRating\n"); }), ErrorCode::ParseError);
}

TEST(Serialize, ErrorsCarryLineNumbers)
{
    try {
        load("grad/1\tlax\t2\nN\tn1\tA\tk=i:1\nN\tn2\tB\tk=x:1\n");
        FAIL();
    } catch (const GradError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Serialize, UndeclaredNodeIsDangling)
{
    try {
        load("grad/1\tlax\t2\nN\tn1\tA\tk=i:1\nE\tn1\tn9\tAssociation\tR\n");
        FAIL();
    } catch (const GradError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("DanglingReference"), std::string::npos);
    }
}

TEST(Serialize, NaNIsNotSaved)
{
    GradGraph g;
    g.add_literal(g.add_attribute(g.add_entity_node("M", {{"k", 1}}), "x"), std::numeric_limits<double>::quiet_NaN());
    EXPECT_EQ(code_of([&] { save(g); }), ErrorCode::SinkError);
}

TEST(Serialize, StrictDocumentRejectsDuplicates)
{
    EXPECT_EQ(code_of([] { load("grad/1\tstrict\t2\nN\tn1\tA\tk=i:1\nN\tn2\tA\tk=i:1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(load("grad/1\tlax\t2\nN\tn1\tA\tk=i:1\nN\tn2\tA\tk=i:1\n").node_count(), 2u);
}

TEST(Serialize, StreamSinkAndSource)
{
    std::ostringstream out;
    const std::size_t n = save(movielens().g, out);
    EXPECT_EQ(n, out.str().size());
    std::istringstream in(out.str());
    EXPECT_EQ(save(load(in)), out.str());

    std::ostringstream bad;
    bad.setstate(std::ios::badbit);
    EXPECT_EQ(code_of([&] { save(movielens().g, bad); }), ErrorCode::SinkError);
}

// ---------------------------------------------------------------------------
// Loading tables

TEST(Etl, ExampleTablesGiveTheExampleGraph)
{
    const auto g = load_example8();
    EXPECT_EQ(canonical(g), canonical(movielens().g));
    EXPECT_EQ(g.entity_nodes().size(), 6u);
    EXPECT_EQ(g.edge_count(), 7u);
}

TEST(Etl, RowOrderDoesNotMatter)
{
    const std::string text = "imdbID\trtID\ttype\tvalue\n3884\tStar_Trek\tAudience\t8.5\n3884\tStar_Trek\tCritics\t7.2\n1\tX\tAudience\t5\n";
    const std::string reversed = "imdbID\trtID\ttype\tvalue\n1\tX\tAudience\t5\n3884\tStar_Trek\tCritics\t7.2\n3884\tStar_Trek\tAudience\t8.5\n";
    const auto a = etl({parse_table("ratings", text, '\t', true, rating_columns())}, rating_mapping());
    const auto b = etl({parse_table("ratings", reversed, '\t', true, rating_columns())}, rating_mapping());
    EXPECT_EQ(canonical(a), canonical(b));
    EXPECT_EQ(a.entity_nodes().size(), 2u);
}

TEST(Etl, RowsAboutOneMovieShareAHypernode)
{
    const std::string text = "imdbID\trtID\ttype\tvalue\n3884\tStar_Trek\tAudience\t8.5\n3884\tStar_Trek\tCritics\t7.2\n";
    const auto g = etl({parse_table("ratings", text, '\t', true, rating_columns())}, rating_mapping());
    ASSERT_EQ(g.entity_nodes().size(), 1u);
    EXPECT_EQ(g.attribute_nodes().size(), 1u);
    EXPECT_EQ(g.literal_nodes().size(), 2u);
}

TEST(Etl, CoercionAndArityErrors)
{
    EXPECT_EQ(code_of([] { parse_table("ratings", "h\n3884\tS\tAudience\tabc\n", '\t', true, rating_columns()); }),
              ErrorCode::TypeCoercionError);
    EXPECT_EQ(code_of([] { parse_table("ratings", "3884\tS\tAudience\n", '\t', false, rating_columns()); }),
              ErrorCode::MappingError);
    EXPECT_EQ(code_of([] { parse_table("t", "maybe\n", ',', false, {{"b", ColumnType::Boolean}}); }), ErrorCode::TypeCoercionError);
    const auto t = parse_table("t", "1,,true\n", ',', false,
                               {{"a", ColumnType::Integer}, {"b", ColumnType::Text}, {"c", ColumnType::Boolean}});
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_FALSE(t.rows[0][1].has_value());
    EXPECT_EQ(*t.rows[0][2], Value(true));
}

TEST(Etl, EmptyIdentifierCell)
{
    const std::string text = "imdbID\trtID\ttype\tvalue\n\tStar_Trek\tAudience\t8.5\n";
    auto mapping = rating_mapping();
    mapping.tables[0].entities[0].identifiers.pop_back();
    EXPECT_EQ(code_of([&] { etl({parse_table("ratings", text, '\t', true, rating_columns())}, mapping); }),
              ErrorCode::MappingError);
}

TEST(Etl, EmptyTablesGiveEmptyGraph)
{
    const auto g = etl({parse_table("ratings", "imdbID\trtID\ttype\tvalue\n", '\t', true, rating_columns())}, rating_mapping());
    EXPECT_TRUE(g.empty());
}

TEST(Etl, MissingFileNamesThePath)
{
    const auto mapping = parse_mapping("table ratings\n  file nowhere.dat\n  column a int\n  entity m M k=a\n", data_dir());
    try {
        etl_from_files(mapping);
        FAIL();
    } catch (const GradError& e) {
        EXPECT_NE(std::string(e.what()).find("nowhere.dat"), std::string::npos);
    }
}

TEST(Etl, MappingSyntaxErrors)
{
    EXPECT_EQ(code_of([] { parse_mapping("column a int\n", "."); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_mapping("table t\n  column a decimalish\n", "."); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_mapping("table t\n  edge a b Friendship R\n", "."); }), ErrorCode::ParseError);
}

TEST(Etl, ConstantsAndEdgeAttributes)
{
    const auto m = parse_mapping("table t\n  file t.csv\n  header no\n  delimiter comma\n  column a int\n  column b string\n"
                                 "  entity x M k=a source=s:import\n  entity y N k=b\n  edge x y Association R w=i:2\n",
                                 ".");
    const auto g = etl({parse_table("t", "1,p\n2,p\n", ',', false, m.tables[0].columns)}, m);
    EXPECT_EQ(g.entity_nodes().size(), 3u);
    EXPECT_EQ(g.entity_edges().size(), 2u);
    for (const auto& [_, e] : g.entity_edges()) EXPECT_EQ(e.attributes.at("w"), Value(2));
    for (const auto& [_, n] : g.entity_nodes()) {
        if (n.class_label == "M") {
            EXPECT_EQ(n.identifiers.at("source"), Value("import"));
        }
    }
}

TEST(Etl, PropertyGraphLifting)
{
    const auto pg = parse_property_graph_json(R"({
        "nodes": [
            {"id": "a", "label": "MOVIE", "properties": {"IMDB_ID": 3884, "title": "Star Trek", "year": 2009}},
            {"id": "b", "label": "ACTOR", "properties": {"name": "Eric Bana"}},
            {"id": "c", "label": "MOVIE", "properties": {"IMDB_ID": 3884, "rating": 8.5}}
        ],
        "edges": [{"start": "a", "end": "b", "label": "ACTS", "properties": {"ranking": 1}}]
    })");
    const auto g = lift_property_graph(pg, {{"MOVIE", {"IMDB_ID"}}, {"ACTOR", {"name"}}});
    EXPECT_EQ(g.entity_nodes().size(), 2u);
    ASSERT_EQ(g.entity_edges().size(), 1u);
    EXPECT_EQ(g.entity_edges().begin()->second.attributes.at("ranking"), Value(1));
    NodeId movie{};
    for (const auto& [h, n] : g.entity_nodes())
        if (n.class_label == "MOVIE") movie = h;
    EXPECT_EQ(g.attributes_of(movie).size(), 3u);
    EXPECT_EQ(code_of([] { parse_property_graph_json("{\"nodes\": 3}"); }), ErrorCode::ParseError);
}

// ---------------------------------------------------------------------------
// Text formats

TEST(TextFormat, FixtureFilesMatchCodeFixtures)
{
    EXPECT_EQ(parse_pattern(read_file(data_dir() / "top_movies.pat")), top_movies_pattern());
    EXPECT_EQ(parse_pattern(read_file(data_dir() / "movie_assertion.pat")), movie_assertion_pattern());
    EXPECT_EQ(parse_pattern(read_file(data_dir() / "coactors.pat")), coactor_pattern());
    EXPECT_EQ(parse_template(read_file(data_dir() / "coactors.tpl")), coactor_template());
    const JoinPredicate by_imdb{{{"MOVIE", {"IMDB_ID"}}}};
    EXPECT_EQ(parse_join_predicate(read_file(data_dir() / "movie_join.pred")), by_imdb);

    const auto cs = parse_constraints(read_file(data_dir() / "movies.constraints"), data_dir());
    ASSERT_EQ(cs.assertions.size(), 1u);
    EXPECT_EQ(cs.assertions[0].name, "rated-and-cast");
    EXPECT_EQ(cs.assertions[0].pattern, movie_assertion_pattern());
    EXPECT_EQ(cs.assertions[0].anchor_vars, std::vector<std::string>{"m"});
    ASSERT_EQ(cs.multiplicities.size(), 1u);
    EXPECT_EQ(cs.multiplicities[0].to_string(), movies_need_actors().to_string());
}

TEST(TextFormat, PatternRoundTrip)
{
    Rng rng(0x7e47);
    for (int i = 0; i < 200; ++i) {
        const auto g = random_graph(rng);
        const auto p = random_pattern(rng, g);
        const std::string text = write_pattern(p);
        EXPECT_EQ(parse_pattern(text), p) << text;
    }
}

TEST(TextFormat, TemplateRoundTrip)
{
    GraphTemplate t = coactor_template();
    t.attributes = {{"r", "x1", TemplateValue::ref("attr")}};
    t.literals = {{"r", TemplateValue::ref("v"), {{"Type", TemplateValue::ref("e", "Type")}, {"src", TemplateValue::of("a b")}}}};
    t.edges.push_back({"x2", "x1", EntityEdgeKind::Generalization, TemplateValue::of("IS A"), {{"w", TemplateValue::of(2)}}, false});
    const std::string text = write_template(t);
    EXPECT_EQ(parse_template(text), t) << text;
}

TEST(TextFormat, JoinPredicateRoundTrip)
{
    const JoinPredicate pr{{{"MOVIE", {"IMDB_ID", "RT_ID"}}, {"ACTOR NAME", {"name"}}}};
    EXPECT_EQ(parse_join_predicate(write_join_predicate(pr)), pr);
}

TEST(TextFormat, CountRanges)
{
    EXPECT_EQ(parse_count_range("[1..*]").to_string(), CountRange({1, std::nullopt}).to_string());
    EXPECT_EQ(parse_count_range("*").min, 0u);
    EXPECT_FALSE(parse_count_range("*").max);
    EXPECT_EQ(parse_count_range("[2]").max, 2u);
    EXPECT_EQ(parse_count_range("2").min, 2u);
    EXPECT_EQ(*parse_count_range("0..3").max, 3u);
    EXPECT_EQ(code_of([] { parse_count_range("[a..b]"); }), ErrorCode::ParseError);
}

TEST(TextFormat, Tokenizer)
{
    EXPECT_EQ(tokenize("a \"b c\" d # comment"), (std::vector<std::string>{"a", "b c", "d"}));
    EXPECT_EQ(tokenize(R"("q\"uote" "\\")"), (std::vector<std::string>{"q\"uote", "\\"}));
    EXPECT_EQ(code_of([] { tokenize("\"open"); }), ErrorCode::ParseError);
    for (const std::string s : {"plain", "two words", "#hash", "q\"q", ""})
        EXPECT_EQ(tokenize(quote_token(s)), std::vector<std::string>{s});
}

TEST(TextFormat, SyntaxErrorsCarryLines)
{
    try {
        parse_pattern("nodes\n  m entity label = MOVIE\n  x gadget\n");
        FAIL();
    } catch (const GradError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_EQ(code_of([] { parse_constraints("MOVIE ACTS ACTOR [3..1, *]\n", "."); }), ErrorCode::InvalidMultiplicity);
    EXPECT_EQ(code_of([] { parse_join_predicate("merge MOVIE\n"); }), ErrorCode::InvalidJoinPredicate);
    EXPECT_EQ(code_of([] { parse_join_predicate("match MOVIE IMDB_ID\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { read_file("/nonexistent/file.pat"); }), ErrorCode::ParseError);
}

// ---------------------------------------------------------------------------
// Renderings

TEST(Export, JsonShape)
{
    const auto doc = nlohmann::json::parse(to_json(movielens().g));
    EXPECT_EQ(doc["format"], "grad/1");
    ASSERT_EQ(doc["entities"].size(), 6u);
    ASSERT_EQ(doc["edges"].size(), 5u);
    std::size_t attributes = 0, literals = 0;
    for (const auto& e : doc["entities"]) {
        attributes += e["attributes"].size();
        for (const auto& a : e["attributes"]) literals += a["literals"].size();
        if (e["class"] == "MOVIE") {
            EXPECT_EQ(e["identifiers"]["IMDB_ID"], 3884);
            EXPECT_EQ(e["attributes"][0]["literals"][0]["value"], 8.5);
            EXPECT_EQ(e["attributes"][0]["literals"][0]["context"]["Type"], "Audience");
        }
    }
    EXPECT_EQ(attributes, 1u);
    EXPECT_EQ(literals, 1u);
}

TEST(Export, DotMentionsEveryNode)
{
    const std::string dot = to_dot(movielens().g);
    EXPECT_EQ(dot.rfind("digraph", 0), 0u);
    for (const char* s : {"Eric_Bana", "Chris_Pine", "UTAH", "USA", "J.J._Abrams", "Rating", "8.5", "LOCATED IN"})
        EXPECT_NE(dot.find(s), std::string::npos) << s;
    EXPECT_EQ(dot.back(), '\n');
}
