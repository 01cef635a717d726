// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "fixtures.hpp"
#include "stprune/centrality.hpp"
#include "stprune/random_instance.hpp"

namespace stprune {
namespace {

// Independent oracle: enumerate every simple path between every node pair,
// keep the shortest ones, and award fractional credit to interior nodes.
// Exponential, for tiny graphs only.
std::vector<double> brute_force_betweenness(const SteinerInstance& inst)
{
    const int n = inst.node_count();
    const AdjacencyList adj(inst);
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);

    for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
            std::vector<std::vector<int>> best_paths;
            std::int64_t best_len = std::numeric_limits<std::int64_t>::max();
            std::vector<int> path{s};
            std::vector<bool> used(static_cast<std::size_t>(n), false);
            used[static_cast<std::size_t>(s)] = true;
            std::function<void(int, std::int64_t)> dfs = [&](int v,
                                                             std::int64_t len) {
                if (v == t) {
                    if (len < best_len) {
                        best_len = len;
                        best_paths.clear();
                    }
                    if (len == best_len)
                        best_paths.push_back(path);
                    return;
                }
                for (const auto& [w, e] : adj.at[static_cast<std::size_t>(v)]) {
                    if (used[static_cast<std::size_t>(w)])
                        continue;
                    used[static_cast<std::size_t>(w)] = true;
                    path.push_back(w);
                    dfs(w, len + inst.edge(e).weight.micros());
                    path.pop_back();
                    used[static_cast<std::size_t>(w)] = false;
                }
            };
            dfs(s, 0);
            if (best_paths.empty())
                continue;
            const double credit = 1.0 / static_cast<double>(best_paths.size());
            for (const auto& p : best_paths)
                for (std::size_t i = 1; i + 1 < p.size(); ++i)
                    acc[static_cast<std::size_t>(p[i])] += credit;
        }
    }
    if (n > 2) {
        const double scale = 2.0 / (static_cast<double>(n - 1) * (n - 2));
        for (double& x : acc)
            x *= scale;
    }
    return acc;
}

TEST(DegreeCentrality, HandValues)
{
    const auto g1 = degree_centrality(testing::g1());
    EXPECT_DOUBLE_EQ(g1[3], 1.0);  // hub node 4
    EXPECT_DOUBLE_EQ(g1[0], 1.0);  // node 1 touches 2,3,4

    const auto g2 = degree_centrality(testing::g2());
    EXPECT_DOUBLE_EQ(g2[1], 1.0);
    EXPECT_DOUBLE_EQ(g2[0], 1.0);
}

TEST(DegreeCentrality, SingleNodeGraphRejected)
{
    const SteinerInstance one("one", 1, {}, {0});
    EXPECT_THROW(degree_centrality(one), Error);
}

TEST(Betweenness, G2MiddleNodeCarriesTheOnlyShortestPath)
{
    const auto b = betweenness_centrality(testing::g2());
    EXPECT_NEAR(b[1], 1.0, 1e-12);
    EXPECT_NEAR(b[0], 0.0, 1e-12);
    EXPECT_NEAR(b[2], 0.0, 1e-12);
    EXPECT_EQ(b, brute_force_betweenness(testing::g2()));
}

TEST(Betweenness, G3HasNoInteriorNodes)
{
    const auto b = betweenness_centrality(testing::g3());
    EXPECT_DOUBLE_EQ(b[0], 0.0);
    EXPECT_DOUBLE_EQ(b[1], 0.0);
}

TEST(Betweenness, G1HubOnAllPairs)
{
    const auto b = betweenness_centrality(testing::g1());
    const auto oracle = brute_force_betweenness(testing::g1());
    EXPECT_NEAR(b[3], 1.0, 1e-12);
    for (int v = 0; v < 4; ++v)
        EXPECT_NEAR(b[static_cast<std::size_t>(v)],
                    oracle[static_cast<std::size_t>(v)], 1e-12);
}

TEST(Betweenness, MatchesBruteForceOnRandomInstances)
{
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const SteinerInstance inst = random_instance(7, 0.35, 2, 1, 7, seed);
        const auto fast = betweenness_centrality(inst);
        const auto slow = brute_force_betweenness(inst);
        for (int v = 0; v < inst.node_count(); ++v)
            EXPECT_NEAR(fast[static_cast<std::size_t>(v)],
                        slow[static_cast<std::size_t>(v)], 1e-9)
                << "seed " << seed << " node " << v;
    }
}

TEST(Betweenness, LeafNodesScoreZero)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SteinerInstance inst = random_instance(8, 0.0, 2, 1, 9, seed);
        std::vector<int> deg(8, 0);
        for (const Edge& e : inst.edges()) {
            ++deg[static_cast<std::size_t>(e.u)];
            ++deg[static_cast<std::size_t>(e.v)];
        }
        const auto b = betweenness_centrality(inst);
        for (int v = 0; v < 8; ++v)
            if (deg[static_cast<std::size_t>(v)] == 1)
                EXPECT_DOUBLE_EQ(b[static_cast<std::size_t>(v)], 0.0);
    }
}

TEST(Betweenness, RejectsNonpositiveWeights)
{
    const SteinerInstance zero("zero", 2, {Edge{0, 1, Weight{}}}, {0, 1});
    EXPECT_THROW(betweenness_centrality(zero), Error);
}

TEST(Betweenness, ParallelMatchesSequentialBitwise)
{
    const SteinerInstance inst = random_instance(60, 0.15, 5, 1, 20, 99);
    const auto seq = betweenness_centrality(inst, 1);
    const auto par = betweenness_centrality(inst, 2);
    ASSERT_EQ(seq.size(), par.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        EXPECT_EQ(seq[i], par[i]);
}

TEST(Eigenvector, G3SymmetricPair)
{
    const auto x = eigenvector_centrality(testing::g3());
    EXPECT_NEAR(x[0], 1.0 / std::sqrt(2.0), 1e-7);
    EXPECT_NEAR(x[1], 1.0 / std::sqrt(2.0), 1e-7);
}

TEST(Eigenvector, G1SymmetryAndResidual)
{
    const SteinerInstance inst = testing::g1();
    const auto x = eigenvector_centrality(inst);
    EXPECT_NEAR(x[0], x[1], 1e-7);
    EXPECT_NEAR(x[1], x[2], 1e-7);
    // Residual check against the dense adjacency: A x = lambda x.
    double a[4][4] = {};
    for (const Edge& e : inst.edges())
        a[e.u][e.v] = a[e.v][e.u] = 1.0;
    double ax[4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            ax[i] += a[i][j] * x[static_cast<std::size_t>(j)];
    double lambda = 0.0;
    for (int i = 0; i < 4; ++i)
        lambda += ax[i] * x[static_cast<std::size_t>(i)];
    for (int i = 0; i < 4; ++i)
        EXPECT_NEAR(ax[i], lambda * x[static_cast<std::size_t>(i)], 1e-6);
}

TEST(Eigenvector, StarCenterDominates)
{
    const SteinerInstance star("star", 4,
                               {Edge{3, 0, Weight::from_int(1)},
                                Edge{3, 1, Weight::from_int(1)},
                                Edge{3, 2, Weight::from_int(1)}},
                               {0, 1});
    const auto x = eigenvector_centrality(star);
    EXPECT_GT(x[3], x[0]);
    EXPECT_GT(x[3], x[1]);
    EXPECT_GT(x[3], x[2]);
    double norm = 0.0;
    for (double v : x)
        norm += v * v;
    EXPECT_NEAR(norm, 1.0, 1e-9);
    for (double v : x)
        EXPECT_GT(v, 0.0);
}

TEST(Eigenvector, BipartitePathConverges)
{
    // Path graphs are bipartite; plain power iteration would oscillate.
    const SteinerInstance path("p3", 3,
                               {Edge{0, 1, Weight::from_int(1)},
                                Edge{1, 2, Weight::from_int(1)}},
                               {0, 2});
    const auto x = eigenvector_centrality(path);
    EXPECT_NEAR(x[0], 0.5, 1e-6);
    EXPECT_NEAR(x[1], 1.0 / std::sqrt(2.0), 1e-6);
    EXPECT_NEAR(x[2], 0.5, 1e-6);
}

TEST(Centrality, InvariantUnderUniformWeightScaling)
{
    const SteinerInstance base = random_instance(9, 0.3, 3, 1, 9, 5);
    std::vector<Edge> scaled_edges;
    for (const Edge& e : base.edges())
        scaled_edges.push_back(
            Edge{e.u, e.v, Weight::from_micros(e.weight.micros() * 7)});
    const SteinerInstance scaled("scaled", base.node_count(), scaled_edges,
                                 base.terminals());

    EXPECT_EQ(degree_centrality(base), degree_centrality(scaled));
    EXPECT_EQ(eigenvector_centrality(base), eigenvector_centrality(scaled));
    const auto b1 = betweenness_centrality(base);
    const auto b2 = betweenness_centrality(scaled);
    for (std::size_t i = 0; i < b1.size(); ++i)
        EXPECT_NEAR(b1[i], b2[i], 1e-12);
}

}  // namespace
}  // namespace stprune
