// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "fixtures.hpp"
#include "stprune/graph.hpp"
#include "stprune/random_instance.hpp"

namespace stprune {
namespace {

TEST(ToDirected, G3HasTwoArcsOneCommodity)
{
    const SteinerInstance inst = testing::g3();
    const DirectedInstance d = to_directed(inst, 0);
    EXPECT_EQ(d.arc_count(), 2);
    EXPECT_EQ(d.commodities(), (std::vector<int>{1}));
    EXPECT_EQ(d.root(), 0);
}

TEST(ToDirected, G1ArcDoubling)
{
    const SteinerInstance inst = testing::g1();
    const DirectedInstance d = to_directed(inst, 0);
    EXPECT_EQ(d.arc_count(), 12);
    EXPECT_EQ(d.commodities(), (std::vector<int>{1, 2}));
}

TEST(ToDirected, RootMustBeTerminal)
{
    const SteinerInstance inst = testing::g1();
    EXPECT_THROW(to_directed(inst, 3), Error);  // node 4 is a Steiner node
}

TEST(ToDirected, ArcPairsMirrorEdges)
{
    const SteinerInstance inst = testing::g1();
    const DirectedInstance d = to_directed(inst, 0);
    for (int e = 0; e < inst.edge_count(); ++e) {
        const auto [a1, a2] = DirectedInstance::arcs_of_edge(e);
        EXPECT_EQ(d.arc(a1).from, d.arc(a2).to);
        EXPECT_EQ(d.arc(a1).to, d.arc(a2).from);
        EXPECT_EQ(d.arc(a1).weight, d.arc(a2).weight);
        EXPECT_EQ(d.edge_of_arc(a1), e);
        EXPECT_EQ(d.edge_of_arc(a2), e);
    }
}

TEST(ToDirected, ArcWeightSumDoublesEdgeWeightSum)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SteinerInstance inst =
            random_instance(3 + static_cast<int>(seed % 10), 0.4, 2, 1, 9, seed);
        const DirectedInstance d = to_directed(inst, inst.terminals().front());
        Weight arc_sum;
        for (const Arc& a : d.arcs())
            arc_sum += a.weight;
        EXPECT_EQ(arc_sum, inst.total_weight() + inst.total_weight());
    }
}

TEST(ToDirected, DroppingDirectionsRecoversEdgeMultiset)
{
    const SteinerInstance inst = testing::g1();
    const DirectedInstance d = to_directed(inst, 1);
    std::map<std::pair<int, int>, int> undirected;
    for (const Arc& a : d.arcs())
        ++undirected[{std::min(a.from, a.to), std::max(a.from, a.to)}];
    EXPECT_EQ(undirected.size(), 6u);
    for (const auto& [key, count] : undirected)
        EXPECT_EQ(count, 2);
}

TEST(TerminalsConnected, StarEdgesConnectG1)
{
    const SteinerInstance inst = testing::g1();
    const std::vector<int> star{0, 1, 2};
    EXPECT_TRUE(terminals_connected(inst, star));
}

TEST(TerminalsConnected, SingleHeavyEdgeLeavesTerminalIsolated)
{
    const SteinerInstance inst = testing::g1();
    const std::vector<int> only_12{3};  // edge (1,2)
    EXPECT_FALSE(terminals_connected(inst, only_12));
}

TEST(TerminalsConnected, DirectEdgeConnectsG2)
{
    const SteinerInstance inst = testing::g2();
    const std::vector<int> direct{2};  // edge (1,3)
    EXPECT_TRUE(terminals_connected(inst, direct));
}

TEST(GraphConnected, DetectsDisconnection)
{
    const SteinerInstance disconnected(
        "disc", 4,
        {Edge{0, 1, Weight::from_int(1)}, Edge{2, 3, Weight::from_int(1)}},
        {0, 3});
    EXPECT_FALSE(graph_connected(disconnected));
    EXPECT_TRUE(graph_connected(testing::g1()));
}

}  // namespace
}  // namespace stprune
