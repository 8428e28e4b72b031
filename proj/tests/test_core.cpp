#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "grad/constraints.hpp"
#include "grad/identity.hpp"

using namespace grad;
using namespace grad::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const GradError& err) {
        return err.code();
    }
    ADD_FAILURE() << "expected a GradError";
    return ErrorCode::StructuralViolation;
}

/// Every edge endpoint exists and sits in the right partition.
bool no_dangling(const GradGraph& g)
{
    for (const auto& [_, e] : g.entity_edges())
        if (!g.entity_nodes().count(e.start) || !g.entity_nodes().count(e.end)) return false;
    for (const auto& [_, e] : g.attribute_edges())
        if (!g.entity_nodes().count(e.start) || !g.attribute_nodes().count(e.end)) return false;
    for (const auto& [_, e] : g.literal_edges())
        if (!g.attribute_nodes().count(e.start) || !g.literal_nodes().count(e.end)) return false;
    return true;
}

}  // namespace

TEST(EntityNodes, StoresClassAndIdentifiers)
{
    GradGraph g;
    const NodeId v1 = g.add_entity_node("MOVIE", {{"IMDB_ID", 3884}, {"RT_ID", "Star_Trek"}});
    EXPECT_EQ(g.entity(v1).class_label, "MOVIE");
    EXPECT_EQ(g.entity(v1).identifiers.at("IMDB_ID"), Value(3884));
    EXPECT_EQ(identity_key(g, v1).to_string(), "<MOVIE,{IMDB_ID=3884,RT_ID=Star_Trek}>");

    const NodeId v3 = g.add_entity_node("COUNTRY", {{"CountryName", "USA"}});
    EXPECT_EQ(identity_key(g, v3).to_string(), "<COUNTRY,{CountryName=USA}>");
}

TEST(EntityNodes, RejectsEmptyLabelOrIdentifiers)
{
    GradGraph g;
    EXPECT_EQ(code_of([&] { g.add_entity_node("X", {}); }), ErrorCode::EmptyIdentifier);
    EXPECT_EQ(code_of([&] { g.add_entity_node("", {{"id", 1}}); }), ErrorCode::EmptyLabel);
}

TEST(EntityNodes, StrictModeRejectsDuplicateIdentity)
{
    GradGraph lax;
    lax.add_entity_node("MOVIE", {{"IMDB_ID", 3884}});
    EXPECT_NO_THROW(lax.add_entity_node("MOVIE", {{"IMDB_ID", 3884}}));

    GradGraph strict(GraphMode::Strict);
    strict.add_entity_node("MOVIE", {{"IMDB_ID", 3884}});
    EXPECT_EQ(code_of([&] { strict.add_entity_node("MOVIE", {{"IMDB_ID", 3884}}); }), ErrorCode::DuplicateIdentity);
    EXPECT_NO_THROW(strict.add_entity_node("ACTOR", {{"IMDB_ID", 3884}}));
}

TEST(EntityEdges, ExampleEdges)
{
    auto m = movielens();
    const auto& e15 = m.g.entity_edge(m.e15);
    EXPECT_EQ(e15.label, "ACTS");
    EXPECT_EQ(e15.attributes.at("ranking"), Value(1));
    EXPECT_EQ(m.g.entity_edge(m.e23).kind, EntityEdgeKind::Composition);
    EXPECT_EQ(m.g.composition_parent(m.v2), m.v3);
}

TEST(EntityEdges, OneOutgoingParentEdgePerKind)
{
    auto m = movielens();
    EXPECT_EQ(code_of([&] { m.g.add_entity_edge(m.v2, m.v4, EntityEdgeKind::Composition, "PART OF"); }),
              ErrorCode::DuplicateParentEdge);
    // Other parent kinds are counted separately.
    EXPECT_NO_THROW(m.g.add_entity_edge(m.v2, m.v4, EntityEdgeKind::Aggregation, "PART OF"));
    EXPECT_NO_THROW(m.g.add_entity_edge(m.v5, m.v4, EntityEdgeKind::Generalization, "IS"));
}

TEST(EntityEdges, UnknownEndpointsAndEmptyLabel)
{
    auto m = movielens();
    EXPECT_EQ(code_of([&] { m.g.add_entity_edge(m.v1, NodeId{999}, EntityEdgeKind::Association, "X"); }),
              ErrorCode::UnknownNode);
    EXPECT_EQ(code_of([&] { m.g.add_entity_edge(m.v1, m.rating, EntityEdgeKind::Association, "X"); }),
              ErrorCode::UnknownNode);
    EXPECT_EQ(code_of([&] { m.g.add_entity_edge(m.v1, m.v5, EntityEdgeKind::Association, ""); }), ErrorCode::EmptyLabel);
}

TEST(EntityEdges, DuplicateLabelPairOnlyInStrictMode)
{
    auto m = movielens();
    EXPECT_NO_THROW(m.g.add_entity_edge(m.v1, m.v5, EntityEdgeKind::Association, "ACTS"));

    GradGraph strict(GraphMode::Strict);
    const NodeId a = strict.add_entity_node("MOVIE", {{"id", 1}});
    const NodeId b = strict.add_entity_node("ACTOR", {{"id", 2}});
    strict.add_entity_edge(a, b, EntityEdgeKind::Association, "ACTS");
    EXPECT_EQ(code_of([&] { strict.add_entity_edge(a, b, EntityEdgeKind::Association, "ACTS"); }),
              ErrorCode::DuplicateEdgeLabelPair);
    EXPECT_NO_THROW(strict.add_entity_edge(b, a, EntityEdgeKind::Association, "ACTS"));
}

TEST(EntityEdges, SelfLoopsAllowed)
{
    GradGraph g;
    const NodeId a = g.add_entity_node("ACTOR", {{"id", 1}});
    EXPECT_NO_THROW(g.add_entity_edge(a, a, EntityEdgeKind::Association, "ADMIRES"));
}

TEST(Attributes, IdempotentPerLabel)
{
    auto m = movielens();
    EXPECT_EQ(m.g.add_attribute(m.v1, "Rating"), m.rating);
    EXPECT_EQ(m.g.attribute_nodes().size(), 1u);
    EXPECT_EQ(code_of([&] { m.g.add_attribute(NodeId{12345}, "x"); }), ErrorCode::UnknownNode);
    EXPECT_EQ(code_of([&] { m.g.add_attribute(m.v1, ""); }), ErrorCode::EmptyLabel);
    EXPECT_EQ(identity_key(m.g, m.rating).to_string(), "<Rating,<MOVIE,{IMDB_ID=3884,RT_ID=Star_Trek}>>");
}

TEST(Literals, ValueAndContext)
{
    auto m = movielens();
    EXPECT_EQ(m.g.literal(m.audience).value, Value(8.5));
    EXPECT_EQ(m.g.literal_edge(m.erv).context.at("Type"), Value("Audience"));

    m.g.add_literal(m.rating, 7.2, {{"Type", "Critics"}});
    EXPECT_EQ(m.g.literals_of(m.rating).size(), 2u);
    EXPECT_EQ(code_of([&] { m.g.add_literal(m.rating, 1, {{"Type", Value::composite({1, 2})}}); }),
              ErrorCode::CompositeContextValue);
}

TEST(Literals, DuplicateContextIsAWarning)
{
    auto m = movielens();
    m.g.add_literal(m.rating, 9.0, {{"Type", "Audience"}});
    EXPECT_EQ(m.g.literals_of(m.rating).size(), 2u);
    const auto issues = check_entity_integrity(m.g);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].rule, Rule::DuplicateLiteralContext);
    EXPECT_EQ(issues[0].severity, Severity::Warning);
}

TEST(Removal, CountryTakesItsCities)
{
    auto m = movielens();
    const std::size_t removed = m.g.remove_node(m.v3);
    EXPECT_FALSE(m.g.contains(m.v3));
    EXPECT_FALSE(m.g.contains(m.v2));
    EXPECT_FALSE(m.g.contains(m.e23));
    EXPECT_FALSE(m.g.contains(m.e12));
    EXPECT_EQ(removed, 4u);
    EXPECT_TRUE(no_dangling(m.g));
    EXPECT_TRUE(check_structure(m.g).empty());
}

TEST(Removal, AttributeTakesItsLiterals)
{
    auto m = movielens();
    EXPECT_EQ(m.g.remove_node(m.rating), 4u);
    EXPECT_TRUE(m.g.literal_nodes().empty());
    EXPECT_TRUE(no_dangling(m.g));
}

TEST(Removal, IsolatedNodeAndUnknownNode)
{
    GradGraph g;
    const NodeId a = g.add_entity_node("A", {{"id", 1}});
    EXPECT_EQ(g.remove_node(a), 1u);
    EXPECT_EQ(code_of([&] { g.remove_node(a); }), ErrorCode::UnknownNode);
}

TEST(Removal, CascadeFollowsCompositionChains)
{
    GradGraph g;
    const NodeId country = g.add_entity_node("COUNTRY", {{"n", "USA"}});
    const NodeId state = g.add_entity_node("STATE", {{"n", "UT"}});
    const NodeId city = g.add_entity_node("CITY", {{"n", "Provo"}});
    g.add_entity_edge(state, country, EntityEdgeKind::Composition, "IN");
    g.add_entity_edge(city, state, EntityEdgeKind::Composition, "IN");
    g.add_attribute(city, "Population");
    g.remove_node(country);
    EXPECT_TRUE(g.empty());
}

TEST(Hypernodes, MovieHypernode)
{
    auto m = movielens();
    const Hypernode h = m.g.hypernode_of(m.v1);
    EXPECT_EQ(h.root, m.v1);
    EXPECT_EQ(h.attribute_nodes, std::vector<NodeId>{m.rating});
    EXPECT_EQ(h.literal_nodes, std::vector<NodeId>{m.audience});
    EXPECT_EQ(h.attribute_edges, std::vector<EdgeId>{m.e1r});
    EXPECT_EQ(h.literal_edges, std::vector<EdgeId>{m.erv});
    EXPECT_EQ(m.g.hypernode_of(m.v4).size(), 1u);
    EXPECT_THROW(m.g.hypernode_of(m.rating), GradError);
}

TEST(Hypernodes, PartitionEveryNode)
{
    Rng rng(11);
    for (int round = 0; round < 50; ++round) {
        const GradGraph g = random_graph(rng);
        std::map<NodeId, int> owners;
        for (const auto& [id, _] : g.entity_nodes()) {
            const Hypernode h = g.hypernode_of(id);
            ++owners[h.root];
            for (NodeId a : h.attribute_nodes) ++owners[a];
            for (NodeId l : h.literal_nodes) ++owners[l];
        }
        EXPECT_EQ(owners.size(), g.node_count());
        for (const auto& [_, n] : owners) EXPECT_EQ(n, 1);
    }
}

TEST(Identity, WeakEntityKeyIncludesOwner)
{
    auto m = movielens();
    EXPECT_EQ(identity_key(m.g, m.v2).to_string(), "<CITY,<COUNTRY,{CountryName=USA}>,{CityName=UTAH}>");
    EXPECT_EQ(identity_key(m.g, m.e15).to_string(),
              "<ACTS,<MOVIE,{IMDB_ID=3884,RT_ID=Star_Trek}>,<ACTOR,{ActorName=Eric_Bana}>>");
    EXPECT_EQ(code_of([&] { identity_key(m.g, m.audience); }), ErrorCode::UnsupportedElement);
}

TEST(Identity, CompositionCycleIsAnError)
{
    GradGraph g;
    const NodeId a = g.add_entity_node("A", {{"id", 1}});
    const NodeId b = g.add_entity_node("B", {{"id", 2}});
    g.add_entity_edge(a, b, EntityEdgeKind::Composition, "IN");
    g.add_entity_edge(b, a, EntityEdgeKind::Composition, "IN");
    EXPECT_EQ(code_of([&] { identity_key(g, a); }), ErrorCode::CompositionCycle);
    EXPECT_NO_THROW(ordering_key(g, a));
}

TEST(Identity, DeterministicAcrossBuilds)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng r1(seed), r2(seed);
        const GradGraph a = random_graph(r1);
        const GradGraph b = random_graph(r2);
        std::vector<std::string> ka, kb;
        for (const auto& [id, _] : a.entity_nodes()) ka.push_back(ordering_key(a, id).to_string());
        for (const auto& [id, _] : b.entity_nodes()) kb.push_back(ordering_key(b, id).to_string());
        EXPECT_EQ(ka, kb);
    }
}

TEST(Values, Comparisons)
{
    EXPECT_TRUE(compare_values(8.5, CompareOp::Greater, 7));
    EXPECT_TRUE(compare_values("Audience", CompareOp::Equal, "Audience"));
    EXPECT_EQ(code_of([] { compare_values("abc", CompareOp::Less, 3); }), ErrorCode::IncomparableTypes);
    EXPECT_FALSE(compare_values("3", CompareOp::Equal, 3));
    EXPECT_TRUE(compare_values("3", CompareOp::NotEqual, 3));
    EXPECT_TRUE(compare_values(7, CompareOp::Equal, 7.0));
    EXPECT_FALSE(compare_values(7.0, CompareOp::Greater, 7));
    EXPECT_TRUE(compare_values("B", CompareOp::Less, "a"));
    EXPECT_TRUE(compare_values(true, CompareOp::NotEqual, false));
    EXPECT_EQ(code_of([] { compare_values(true, CompareOp::Less, false); }), ErrorCode::IncomparableTypes);
    EXPECT_EQ(code_of([] { Value::composite({}); }), ErrorCode::EmptyIdentifier);
}

TEST(Values, StructuralOrderSeparatesTypes)
{
    EXPECT_NE(Value(7), Value(7.0));
    EXPECT_NE(Value("7"), Value(7));
    EXPECT_EQ(Value::composite({1, "a"}), Value::composite({1, "a"}));
}

TEST(Invariants, HoldAfterRandomMutations)
{
    Rng rng(2024);
    for (int round = 0; round < 100; ++round) {
        GradGraph g = random_graph(rng);
        std::vector<NodeId> nodes;
        for (const auto& [id, _] : g.entity_nodes()) nodes.push_back(id);
        for (const auto& [id, _] : g.attribute_nodes()) nodes.push_back(id);
        for (const auto& [id, _] : g.literal_nodes()) nodes.push_back(id);
        std::shuffle(nodes.begin(), nodes.end(), rng);
        for (std::size_t i = 0; i < nodes.size() / 3; ++i)
            if (g.contains(nodes[i])) g.remove_node(nodes[i]);
        ASSERT_TRUE(no_dangling(g));
        ASSERT_TRUE(check_structure(g).empty());

        std::set<std::uint64_t> handles;
        std::size_t count = 0;
        for (const auto& [id, _] : g.entity_nodes()) handles.insert(id.value), ++count;
        for (const auto& [id, _] : g.attribute_nodes()) handles.insert(id.value), ++count;
        for (const auto& [id, _] : g.literal_nodes()) handles.insert(id.value), ++count;
        EXPECT_EQ(handles.size(), count);
        for (const auto& [id, _] : g.entity_nodes())
            for (auto kind : {EntityEdgeKind::Generalization, EntityEdgeKind::Aggregation, EntityEdgeKind::Composition}) {
                std::size_t out = 0;
                for (EdgeId e : g.out_edges(id))
                    if (g.entity_edge(e).kind == kind) ++out;
                EXPECT_LE(out, 1u);
            }
    }
}
