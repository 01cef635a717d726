// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#include <gtest/gtest.h>

#include <vector>

#include "stprune/lp.hpp"

namespace stprune::lp {
namespace {

TEST(Simplex, SmallMaximization)
{
    // min -x - 2y  s.t.  x + y <= 4,  x <= 3,  y <= 2,  x,y >= 0.
    SimplexSolver s;
    const int x = s.add_variable(0.0, kInf, -1.0);
    const int y = s.add_variable(0.0, kInf, -2.0);
    s.add_row({{x, 1.0}, {y, 1.0}}, Sense::kLe, 4.0);
    s.add_row({{x, 1.0}}, Sense::kLe, 3.0);
    s.add_row({{y, 1.0}}, Sense::kLe, 2.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -6.0, 1e-9);
    EXPECT_NEAR(s.value(x), 2.0, 1e-9);
    EXPECT_NEAR(s.value(y), 2.0, 1e-9);
}

TEST(Simplex, EqualityRowsAndPhaseOne)
{
    // min x + y  s.t.  x + y = 3,  x <= 2.
    SimplexSolver s;
    const int x = s.add_variable(0.0, 2.0, 1.0);
    const int y = s.add_variable(0.0, kInf, 1.0);
    s.add_row({{x, 1.0}, {y, 1.0}}, Sense::kEq, 3.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), 3.0, 1e-9);
    EXPECT_NEAR(s.value(x) + s.value(y), 3.0, 1e-9);
}

TEST(Simplex, GreaterEqualRows)
{
    // min 2x + 3y  s.t.  x + y >= 4,  y - x >= 1,  x,y >= 0.
    // y = x + 1 and x + y = 4 bind: x = 1.5, y = 2.5 -> 10.5.
    SimplexSolver s;
    const int x = s.add_variable(0.0, kInf, 2.0);
    const int y = s.add_variable(0.0, kInf, 3.0);
    s.add_row({{x, 1.0}, {y, 1.0}}, Sense::kGe, 4.0);
    s.add_row({{y, 1.0}, {x, -1.0}}, Sense::kGe, 1.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), 10.5, 1e-9);
    EXPECT_NEAR(s.value(x), 1.5, 1e-9);
    EXPECT_NEAR(s.value(y), 2.5, 1e-9);
}

TEST(Simplex, DetectsInfeasibility)
{
    SimplexSolver s;
    const int x = s.add_variable(0.0, kInf, 1.0);
    s.add_row({{x, 1.0}}, Sense::kGe, 2.0);
    s.add_row({{x, 1.0}}, Sense::kLe, 1.0);
    EXPECT_EQ(s.optimize(), Status::kInfeasible);
}

TEST(Simplex, DetectsUnboundedness)
{
    SimplexSolver s;
    const int x = s.add_variable(0.0, kInf, -1.0);
    const int y = s.add_variable(0.0, kInf, 0.0);
    s.add_row({{x, 1.0}, {y, -1.0}}, Sense::kLe, 1.0);
    EXPECT_EQ(s.optimize(), Status::kUnbounded);
}

TEST(Simplex, FreeVariable)
{
    // min x  s.t.  x >= -5 (x free).
    SimplexSolver s;
    const int x = s.add_variable(-kInf, kInf, 1.0);
    s.add_row({{x, 1.0}}, Sense::kGe, -5.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -5.0, 1e-9);
}

TEST(Simplex, PresolveEliminatesFixedVariables)
{
    // y fixed to 0 forces x to 0 through the coupling row.
    SimplexSolver s;
    const int y = s.add_variable(0.0, 0.0, -10.0);
    const int x = s.add_variable(0.0, kInf, -1.0);
    s.add_row({{x, 1.0}, {y, -1.0}}, Sense::kLe, 0.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), 0.0, 1e-12);
    EXPECT_NEAR(s.value(x), 0.0, 1e-12);
    EXPECT_NEAR(s.value(y), 0.0, 1e-12);
}

TEST(Simplex, PresolveDetectsEmptyRowConflict)
{
    SimplexSolver s;
    const int x = s.add_variable(1.0, 1.0, 0.0);
    s.add_row({{x, 1.0}}, Sense::kLe, 0.5);
    EXPECT_EQ(s.optimize(), Status::kInfeasible);
}

TEST(Simplex, ReoptimizeAfterBoundChange)
{
    SimplexSolver s;
    const int x = s.add_variable(0.0, 1.0, -1.0);
    const int y = s.add_variable(0.0, 1.0, -1.0);
    s.add_row({{x, 1.0}, {y, 1.0}}, Sense::kLe, 1.5);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -1.5, 1e-9);
    s.set_bounds(x, 0.0, 0.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -1.0, 1e-9);
    s.set_bounds(x, 0.0, 1.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -1.5, 1e-9);
}

TEST(Simplex, UpperBoundedVariablesFlip)
{
    // All variables want their upper bound; optimum is a pure bound flip
    // solution with no pivots required.
    SimplexSolver s;
    std::vector<int> vars;
    for (int i = 0; i < 5; ++i)
        vars.push_back(s.add_variable(0.0, 2.0, -1.0));
    std::vector<Term> terms;
    for (int v : vars)
        terms.push_back(Term{v, 1.0});
    s.add_row(terms, Sense::kLe, 100.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -10.0, 1e-9);
    for (int v : vars)
        EXPECT_NEAR(s.value(v), 2.0, 1e-12);
}

TEST(Simplex, DegenerateRowsTerminate)
{
    // Klee-Minty-ish degeneracy with duplicated rows; must not cycle.
    SimplexSolver s;
    const int x = s.add_variable(0.0, kInf, -1.0);
    const int y = s.add_variable(0.0, kInf, -1.0);
    for (int i = 0; i < 4; ++i)
        s.add_row({{x, 1.0}, {y, 1.0}}, Sense::kLe, 2.0);
    s.add_row({{x, 1.0}}, Sense::kLe, 2.0);
    s.add_row({{y, 1.0}}, Sense::kLe, 2.0);
    ASSERT_EQ(s.optimize(), Status::kOptimal);
    EXPECT_NEAR(s.objective_value(), -2.0, 1e-9);
}

}  // namespace
}  // namespace stprune::lp
