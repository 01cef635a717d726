// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stprune/oracle.hpp"
#include "stprune/pipeline.hpp"
#include "stprune/random_instance.hpp"

namespace stprune {
namespace {

std::vector<double> random_scores(int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<double> scores(static_cast<std::size_t>(count));
    for (double& s : scores)
        s = (rng() % 1000000) / 999999.0;
    return scores;
}

TEST(MakeMask, ThresholdZeroPrunesNothing)
{
    const std::vector<double> scores{0.1, 0.9, 0.5};
    const std::vector<double> lp{0.0, 1.0, 0.0};
    const PruneMask mask = make_mask(scores, 0.0, lp);
    EXPECT_TRUE(mask.pruned.empty());
    EXPECT_EQ(mask.retained.size(), 3u);
    EXPECT_TRUE(mask.repair_added.empty());
    EXPECT_DOUBLE_EQ(mask.prune_rate(), 0.0);
}

TEST(MakeMask, ThresholdAboveOnePrunesExactlyLpZeroEdges)
{
    const std::vector<double> scores{0.1, 0.9, 0.5, 0.99};
    const std::vector<double> lp{0.0, 1.0, 0.0, 0.5};
    const PruneMask mask = make_mask(scores, 1.1, lp);
    EXPECT_EQ(mask.pruned, (std::vector<int>{0, 2}));
    EXPECT_EQ(mask.retained, (std::vector<int>{1, 3}));
    // Every LP-support edge scored below threshold is repair-added.
    EXPECT_EQ(mask.repair_added, (std::vector<int>{1, 3}));
}

TEST(MakeMask, PartitionInvariants)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SteinerInstance inst = random_instance(12, 0.3, 4, 1, 9, seed);
        const InstanceFeatures f = compute_instance_features(inst);
        const auto scores = random_scores(inst.edge_count(), seed * 31);
        for (double threshold : {0.3, 0.6, 0.9, 1.1}) {
            const PruneMask mask = make_mask(scores, threshold, f.lp_values);
            EXPECT_EQ(mask.pruned.size() + mask.retained.size(),
                      static_cast<std::size_t>(inst.edge_count()));
            for (int e : mask.repair_added) {
                EXPECT_TRUE(std::binary_search(mask.retained.begin(),
                                               mask.retained.end(), e));
                EXPECT_FALSE(std::binary_search(mask.pruned.begin(),
                                                mask.pruned.end(), e));
            }
            // LP-support edges never pruned.
            for (int e : mask.pruned)
                EXPECT_LE(f.lp_values[static_cast<std::size_t>(e)], kLpZeroTol);
        }
    }
}

TEST(MakeMask, RetainedSubgraphKeepsTerminalsConnected)
{
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const SteinerInstance inst = random_instance(14, 0.25, 5, 1, 10, seed);
        const InstanceFeatures f = compute_instance_features(inst);
        const auto scores = random_scores(inst.edge_count(), seed * 7 + 1);
        for (double threshold : {0.3, 0.6, 0.9, 1.1}) {
            const PruneMask mask = make_mask(scores, threshold, f.lp_values);
            EXPECT_TRUE(terminals_connected(inst, mask.retained))
                << "seed " << seed << " threshold " << threshold;
        }
    }
}

TEST(SolveHard, ThresholdZeroEqualsUnpruned)
{
    const SteinerInstance inst = testing::g1();
    const InstanceFeatures f = compute_instance_features(inst);
    const auto scores = random_scores(inst.edge_count(), 3);
    const PruneMask mask = make_mask(scores, 0.0, f.lp_values);
    const SolveReport report = solve_hard(inst, mask, 30.0);
    EXPECT_EQ(report.status, "optimal");
    EXPECT_DOUBLE_EQ(report.objective, 3.0);
    EXPECT_EQ(report.mode, "hard");
}

TEST(SolveHard, HeavyEdgesPrunedStillOptimal)
{
    const SteinerInstance inst = testing::g1();
    PruneMask mask;
    mask.pruned = {3, 4, 5};
    mask.retained = {0, 1, 2};
    mask.threshold = 0.9;
    const SolveReport report = solve_hard(inst, mask, 30.0);
    EXPECT_EQ(report.status, "optimal");
    EXPECT_DOUBLE_EQ(report.objective, 3.0);
    EXPECT_EQ(report.tree_edges, (std::vector<int>{0, 1, 2}));
    EXPECT_DOUBLE_EQ(report.prune_rate, 0.5);
}

TEST(SolveSoft, BudgetZeroEqualsHard)
{
    const SteinerInstance inst = testing::g2();
    PruneMask mask;
    mask.pruned = {0, 1};
    mask.retained = {2};
    const SolveReport hard = solve_hard(inst, mask, 30.0);
    const SolveReport soft = solve_soft(inst, mask, 0, 30.0);
    EXPECT_DOUBLE_EQ(hard.objective, 3.0);
    EXPECT_DOUBLE_EQ(soft.objective, hard.objective);
    EXPECT_EQ(soft.mode, "soft(0)");
}

TEST(SolveSoft, FullBudgetRecoversOptimum)
{
    const SteinerInstance inst = testing::g2();
    PruneMask mask;
    mask.pruned = {0, 1};
    mask.retained = {2};
    const SolveReport soft =
        solve_soft(inst, mask, static_cast<int>(mask.pruned.size()), 30.0);
    EXPECT_DOUBLE_EQ(soft.objective, 2.0);
}

TEST(SolveSoft, SandwichOnRandomInstances)
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const SteinerInstance inst = random_instance(10, 0.3, 4, 1, 9, seed);
        const InstanceFeatures f = compute_instance_features(inst);
        const auto scores = random_scores(inst.edge_count(), seed + 100);
        const PruneMask mask = make_mask(scores, 0.9, f.lp_values);
        const OracleResult opt = dreyfus_wagner(inst);

        const SolveReport hard = solve_hard(inst, mask, 30.0);
        const SolveReport soft0 = solve_soft(inst, mask, 0, 30.0);
        const SolveReport soft1 = solve_soft(inst, mask, 1, 30.0);
        const SolveReport soft_all =
            solve_soft(inst, mask, static_cast<int>(mask.pruned.size()), 30.0);

        EXPECT_DOUBLE_EQ(soft0.objective, hard.objective) << "seed " << seed;
        EXPECT_LE(soft1.objective, soft0.objective) << "seed " << seed;
        EXPECT_LE(opt.objective.value(), soft1.objective + 1e-9)
            << "seed " << seed;
        EXPECT_DOUBLE_EQ(soft_all.objective, opt.objective.value())
            << "seed " << seed;
    }
}

TEST(Evaluate, ReproducesPrintedTableRows)
{
    SolveReport original;
    original.instance = "i160-344";
    original.mode = "original";
    original.objective = 8307.0;
    original.solve_time = 27245.21;

    SolveReport pruned;
    pruned.instance = "i160-344";
    pruned.mode = "hard";
    pruned.objective = 8324.0;
    pruned.feature_time = 54.17;
    pruned.solve_time = 157.71;
    evaluate(pruned, original);
    ASSERT_TRUE(pruned.objective_increase_pct.has_value());
    ASSERT_TRUE(pruned.runtime_decrease_pct.has_value());
    EXPECT_NEAR(*pruned.objective_increase_pct, 0.20, 0.01);
    EXPECT_NEAR(*pruned.runtime_decrease_pct, 99.22, 0.01);

    SolveReport original2;
    original2.instance = "i160-345";
    original2.mode = "original";
    original2.objective = 8327.0;
    original2.solve_time = 70653.84;

    SolveReport pruned2;
    pruned2.instance = "i160-345";
    pruned2.mode = "hard";
    pruned2.objective = 8327.0;
    pruned2.feature_time = 51.93;
    pruned2.solve_time = 242.82;
    evaluate(pruned2, original2);
    EXPECT_NEAR(*pruned2.objective_increase_pct, 0.0, 0.01);
    EXPECT_NEAR(*pruned2.runtime_decrease_pct, 99.58, 0.01);
}

TEST(Evaluate, IdenticalReportsGiveZeroIncrease)
{
    SolveReport original;
    original.instance = "x";
    original.objective = 100.0;
    original.solve_time = 10.0;
    SolveReport same = original;
    same.feature_time = 1.0;
    same.solve_time = 2.0;
    evaluate(same, original);
    EXPECT_DOUBLE_EQ(*same.objective_increase_pct, 0.0);
    EXPECT_DOUBLE_EQ(*same.runtime_decrease_pct, 100.0 * (1.0 - 3.0 / 10.0));
}

TEST(Evaluate, MismatchedInstancesRejected)
{
    SolveReport a;
    a.instance = "a";
    SolveReport b;
    b.instance = "b";
    EXPECT_THROW(evaluate(a, b), Error);
}

TEST(LpBaseline, ThresholdZeroPrunesNothing)
{
    const std::vector<double> lp{0.0, 0.5, 1.0};
    const PruneMask mask = lp_baseline_mask(lp, 0.0);
    EXPECT_TRUE(mask.pruned.empty());
    EXPECT_EQ(mask.source, MaskSource::kLpBaseline);
}

TEST(LpBaseline, TinyThresholdPrunesExactlyLpZeroEdges)
{
    const std::vector<double> lp{0.0, 0.5, 0.0, 1.0};
    const PruneMask mask = lp_baseline_mask(lp, 1e-6);
    EXPECT_EQ(mask.pruned, (std::vector<int>{0, 2}));
}

TEST(LpBaseline, MatchedCountTakesSmallestLpFirst)
{
    const std::vector<double> lp{0.3, 0.0, 0.8, 0.0, 0.1};
    const PruneMask mask = lp_baseline_mask_matched(lp, 3);
    EXPECT_EQ(mask.pruned, (std::vector<int>{1, 3, 4}));
    EXPECT_EQ(mask.retained, (std::vector<int>{0, 2}));
}

TEST(ReportJson, RoundTrip)
{
    SolveReport r;
    r.instance = "g1";
    r.mode = "soft(2)";
    r.objective = 42.5;
    r.optimal_objective = 41.0;
    r.objective_increase_pct = 3.66;
    r.feature_time = 0.25;
    r.solve_time = 1.5;
    r.original_time = 12.0;
    r.runtime_decrease_pct = 85.4;
    r.prune_rate = 0.625;
    r.tree_edges = {0, 2, 5};
    r.status = "optimal";
    const SolveReport back = report_from_json(report_to_json(r));
    EXPECT_EQ(back.instance, r.instance);
    EXPECT_EQ(back.mode, r.mode);
    EXPECT_EQ(back.objective, r.objective);
    EXPECT_EQ(back.optimal_objective, r.optimal_objective);
    EXPECT_EQ(back.tree_edges, r.tree_edges);
    EXPECT_EQ(back.status, r.status);
    EXPECT_EQ(back.prune_rate, r.prune_rate);
}

TEST(InstanceFeatures, RejectsDisconnectedGraphs)
{
    const SteinerInstance disc(
        "disc", 4,
        {Edge{0, 1, Weight::from_int(1)}, Edge{2, 3, Weight::from_int(1)}},
        {0, 1});
    EXPECT_THROW(compute_instance_features(disc), Error);
}

TEST(InstanceFeatures, G1IsLpIntegral)
{
    const InstanceFeatures f = compute_instance_features(testing::g1());
    EXPECT_TRUE(f.lp_integral);
    EXPECT_GT(f.feature_time, 0.0);
    EXPECT_EQ(f.rows.size(), 6u);
}

}  // namespace
}  // namespace stprune
