// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "stprune/weight.hpp"

namespace stprune::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLe, kEq, kGe };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterLimit };

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Row {
    std::vector<Term> terms;
    Sense sense = Sense::kLe;
    double rhs = 0.0;
};

/** Minimal LP backend interface: add variables/constraints, set bounds,
 * optimize, query values. Any LP engine can sit behind it; the built-in
 * engine is the SimplexSolver below.
 */
class Backend {
public:
    virtual ~Backend() = default;

    virtual int add_variable(double lb, double ub, double cost) = 0;
    virtual int add_row(std::vector<Term> terms, Sense sense, double rhs) = 0;
    virtual void set_bounds(int var, double lb, double ub) = 0;
    virtual std::pair<double, double> bounds(int var) const = 0;
    virtual int variable_count() const = 0;
    virtual int row_count() const = 0;

    /// Solve with the current bounds; may be called repeatedly.
    virtual Status optimize() = 0;
    virtual double objective_value() const = 0;
    virtual double value(int var) const = 0;

    /// Hard wall-clock cutoff for optimize(); nullopt disables it.
    virtual void set_deadline(
        std::optional<std::chrono::steady_clock::time_point> deadline)
    {
        (void)deadline;
    }
};

using BackendFactory = std::unique_ptr<Backend> (*)();

/** Self-contained bounded-variable primal simplex (dense tableau,
 * two-phase with artificials, Dantzig pricing with a Bland fallback on
 * stalls). A fixed-variable / singleton-row presolve runs before every
 * solve, which is what makes hard-pruned models cheap.
 */
class SimplexSolver final : public Backend {
public:
    int add_variable(double lb, double ub, double cost) override
    {
        lb_.push_back(lb);
        ub_.push_back(ub);
        cost_.push_back(cost);
        values_.push_back(0.0);
        return static_cast<int>(lb_.size()) - 1;
    }

    int add_row(std::vector<Term> terms, Sense sense, double rhs) override
    {
        rows_.push_back(Row{std::move(terms), sense, rhs});
        return static_cast<int>(rows_.size()) - 1;
    }

    void set_bounds(int var, double lb, double ub) override
    {
        lb_[static_cast<std::size_t>(var)] = lb;
        ub_[static_cast<std::size_t>(var)] = ub;
    }

    std::pair<double, double> bounds(int var) const override
    {
        return {lb_[static_cast<std::size_t>(var)],
                ub_[static_cast<std::size_t>(var)]};
    }

    int variable_count() const override { return static_cast<int>(lb_.size()); }
    int row_count() const override { return static_cast<int>(rows_.size()); }

    double objective_value() const override { return objective_; }
    double value(int var) const override
    {
        return values_[static_cast<std::size_t>(var)];
    }

    void set_deadline(
        std::optional<std::chrono::steady_clock::time_point> deadline) override
    {
        deadline_ = deadline;
    }

    Status optimize() override;

private:
    struct Reduced {
        bool infeasible = false;
        std::vector<char> eliminated;     // per original var
        std::vector<double> fixed_value;  // valid when eliminated
        std::vector<int> keep;            // original ids of surviving vars
        std::vector<int> new_id;          // original -> reduced (-1 if gone)
        std::vector<double> rlb, rub, rcost;
        std::vector<Row> rows;            // reduced ids
    };

    Reduced presolve() const;
    Status solve_reduced(const Reduced& red, std::vector<double>& out_values);

    std::vector<double> lb_, ub_, cost_;
    std::vector<Row> rows_;
    std::vector<double> values_;
    double objective_ = 0.0;
    std::optional<std::chrono::steady_clock::time_point> deadline_;

    static constexpr double kFeasTol = 1e-7;
    static constexpr double kDualTol = 1e-9;
    static constexpr double kPivotTol = 1e-11;
};

inline SimplexSolver::Reduced SimplexSolver::presolve() const
{
    Reduced red;
    const int n = variable_count();
    red.eliminated.assign(static_cast<std::size_t>(n), 0);
    red.fixed_value.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> wlb = lb_, wub = ub_;

    struct WorkRow {
        std::vector<Term> terms;
        Sense sense;
        double rhs;
        bool alive = true;
    };
    std::vector<WorkRow> work;
    work.reserve(rows_.size());
    for (const Row& r : rows_)
        work.push_back(WorkRow{r.terms, r.sense, r.rhs, true});

    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            if (red.eliminated[static_cast<std::size_t>(v)])
                continue;
            const double l = wlb[static_cast<std::size_t>(v)];
            const double u = wub[static_cast<std::size_t>(v)];
            if (u < l - kFeasTol) {
                red.infeasible = true;
                return red;
            }
            if (std::isfinite(l) && std::isfinite(u) && u - l <= 1e-12) {
                red.eliminated[static_cast<std::size_t>(v)] = 1;
                red.fixed_value[static_cast<std::size_t>(v)] = l;
                changed = true;
            }
        }
        for (WorkRow& row : work) {
            if (!row.alive)
                continue;
            // Substitute eliminated vars and drop negligible coefficients.
            std::vector<Term> kept;
            kept.reserve(row.terms.size());
            for (const Term& t : row.terms) {
                if (red.eliminated[static_cast<std::size_t>(t.var)]) {
                    row.rhs -=
                        t.coef * red.fixed_value[static_cast<std::size_t>(t.var)];
                } else if (std::abs(t.coef) > 1e-12) {
                    kept.push_back(t);
                }
            }
            if (kept.size() != row.terms.size()) {
                row.terms = std::move(kept);
                changed = true;
            }
            if (row.terms.empty()) {
                const bool ok =
                    (row.sense == Sense::kLe && row.rhs >= -kFeasTol) ||
                    (row.sense == Sense::kGe && row.rhs <= kFeasTol) ||
                    (row.sense == Sense::kEq && std::abs(row.rhs) <= kFeasTol);
                if (!ok) {
                    red.infeasible = true;
                    return red;
                }
                row.alive = false;
                changed = true;
                continue;
            }
            if (row.terms.size() == 1) {
                const Term t = row.terms.front();
                const double bound = row.rhs / t.coef;
                double& l = wlb[static_cast<std::size_t>(t.var)];
                double& u = wub[static_cast<std::size_t>(t.var)];
                const bool upper = (row.sense == Sense::kLe) == (t.coef > 0.0);
                if (row.sense == Sense::kEq) {
                    l = std::max(l, bound);
                    u = std::min(u, bound);
                } else if (upper) {
                    u = std::min(u, bound);
                } else {
                    l = std::max(l, bound);
                }
                if (u < l) {
                    if (l - u > kFeasTol) {
                        red.infeasible = true;
                        return red;
                    }
                    u = l;
                }
                row.alive = false;
                changed = true;
            }
        }
    }

    red.new_id.assign(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        if (!red.eliminated[static_cast<std::size_t>(v)]) {
            red.new_id[static_cast<std::size_t>(v)] =
                static_cast<int>(red.keep.size());
            red.keep.push_back(v);
            red.rlb.push_back(wlb[static_cast<std::size_t>(v)]);
            red.rub.push_back(wub[static_cast<std::size_t>(v)]);
            red.rcost.push_back(cost_[static_cast<std::size_t>(v)]);
        }
    }
    for (WorkRow& row : work) {
        if (!row.alive)
            continue;
        Row out;
        out.sense = row.sense;
        out.rhs = row.rhs;
        out.terms.reserve(row.terms.size());
        for (const Term& t : row.terms)
            out.terms.push_back(
                Term{red.new_id[static_cast<std::size_t>(t.var)], t.coef});
        red.rows.push_back(std::move(out));
    }
    return red;
}

inline Status SimplexSolver::solve_reduced(const Reduced& red,
                                           std::vector<double>& out_values)
{
    const int ns = static_cast<int>(red.keep.size());
    const int m = static_cast<int>(red.rows.size());

    // Column layout: structural | slack per row | artificial per row (lazy).
    std::vector<double> vlb(red.rlb), vub(red.rub);
    const int slack0 = ns;
    for (int i = 0; i < m; ++i) {
        switch (red.rows[static_cast<std::size_t>(i)].sense) {
        case Sense::kLe:
            vlb.push_back(0.0);
            vub.push_back(kInf);
            break;
        case Sense::kEq:
            vlb.push_back(0.0);
            vub.push_back(0.0);
            break;
        case Sense::kGe:
            vlb.push_back(-kInf);
            vub.push_back(0.0);
            break;
        }
    }

    // Nonbasic start point: each structural at its finite bound (lower
    // preferred), free vars at 0.
    enum : char { kAtLower, kAtUpper, kFree, kBasic };
    std::vector<char> state(static_cast<std::size_t>(ns + m), kAtLower);
    auto nb_value = [&](int j) -> double {
        switch (state[static_cast<std::size_t>(j)]) {
        case kAtLower:
            return vlb[static_cast<std::size_t>(j)];
        case kAtUpper:
            return vub[static_cast<std::size_t>(j)];
        default:
            return 0.0;
        }
    };
    for (int j = 0; j < ns; ++j) {
        if (std::isfinite(vlb[static_cast<std::size_t>(j)]))
            state[static_cast<std::size_t>(j)] = kAtLower;
        else if (std::isfinite(vub[static_cast<std::size_t>(j)]))
            state[static_cast<std::size_t>(j)] = kAtUpper;
        else
            state[static_cast<std::size_t>(j)] = kFree;
    }

    // Residuals decide which rows start on their slack and which need an
    // artificial column.
    std::vector<double> resid(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double s = red.rows[static_cast<std::size_t>(i)].rhs;
        for (const Term& t : red.rows[static_cast<std::size_t>(i)].terms)
            s -= t.coef * nb_value(t.var);
        resid[static_cast<std::size_t>(i)] = s;
    }

    std::vector<int> art_of_row(static_cast<std::size_t>(m), -1);
    std::vector<double> art_sign(static_cast<std::size_t>(m), 1.0);
    int art_count = 0;
    for (int i = 0; i < m; ++i) {
        const double s = resid[static_cast<std::size_t>(i)];
        const double slb = vlb[static_cast<std::size_t>(slack0 + i)];
        const double sub = vub[static_cast<std::size_t>(slack0 + i)];
        if (s < slb - kFeasTol || s > sub + kFeasTol) {
            art_of_row[static_cast<std::size_t>(i)] = art_count++;
        }
    }
    const int art0 = ns + m;
    const int ncols = ns + m + art_count;

    // Dense tableau T = B^-1 [A | I_slack | A_art]; width = ncols.
    std::vector<double> tab(static_cast<std::size_t>(m) *
                                static_cast<std::size_t>(ncols),
                            0.0);
    auto row_ptr = [&](int i) {
        return tab.data() +
               static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols);
    };

    std::vector<int> basic(static_cast<std::size_t>(m));
    std::vector<double> xb(static_cast<std::size_t>(m));
    state.resize(static_cast<std::size_t>(ncols), kAtLower);
    vlb.resize(static_cast<std::size_t>(ncols), 0.0);
    vub.resize(static_cast<std::size_t>(ncols), kInf);

    for (int i = 0; i < m; ++i) {
        double* r = row_ptr(i);
        for (const Term& t : red.rows[static_cast<std::size_t>(i)].terms)
            r[t.var] = t.coef;
        r[slack0 + i] = 1.0;
        const double s = resid[static_cast<std::size_t>(i)];
        const double slb = vlb[static_cast<std::size_t>(slack0 + i)];
        const double sub = vub[static_cast<std::size_t>(slack0 + i)];
        const int art = art_of_row[static_cast<std::size_t>(i)];
        if (art < 0) {
            basic[static_cast<std::size_t>(i)] = slack0 + i;
            state[static_cast<std::size_t>(slack0 + i)] = kBasic;
            xb[static_cast<std::size_t>(i)] = s;
        } else {
            // Park the slack at its nearest bound; artificial absorbs the rest.
            const double parked = std::clamp(s, slb, sub);
            state[static_cast<std::size_t>(slack0 + i)] =
                (parked == sub && std::isfinite(sub)) ? kAtUpper : kAtLower;
            double viol = s - parked;
            const double sign = viol >= 0.0 ? 1.0 : -1.0;
            art_sign[static_cast<std::size_t>(i)] = sign;
            const int col = art0 + art;
            r[col] = sign;
            if (sign < 0.0) {
                for (int j = 0; j < ncols; ++j)
                    r[j] = -r[j];
                // rhs side flips with the row; basic value stays positive.
            }
            basic[static_cast<std::size_t>(i)] = col;
            state[static_cast<std::size_t>(col)] = kBasic;
            xb[static_cast<std::size_t>(i)] = std::abs(viol);
            // Parked slack bound bookkeeping happens via nb_value(state).
        }
    }
    // A sign-flipped row also flips its slack/other columns inside tab; that
    // is exactly B^-1 A for B = diag(sign), so nothing else to fix.

    std::vector<double> dvec(static_cast<std::size_t>(ncols), 0.0);
    auto compute_reduced_costs = [&](const std::vector<double>& cost_row) {
        std::copy(cost_row.begin(), cost_row.end(), dvec.begin());
        for (int i = 0; i < m; ++i) {
            const double cb =
                cost_row[static_cast<std::size_t>(basic[static_cast<std::size_t>(i)])];
            if (cb != 0.0) {
                const double* r = row_ptr(i);
                for (int j = 0; j < ncols; ++j)
                    dvec[static_cast<std::size_t>(j)] -= cb * r[j];
            }
        }
    };

    const long iter_limit =
        50L * (m + ncols) + 20000L;
    long iters = 0;
    long stall = 0;
    bool bland = false;

    auto run_phase = [&](const std::vector<double>& cost_row,
                         bool phase_one) -> Status {
        compute_reduced_costs(cost_row);
        stall = 0;
        while (true) {
            if (++iters > iter_limit)
                return Status::kIterLimit;
            if (deadline_ && (iters & 255) == 0 &&
                std::chrono::steady_clock::now() > *deadline_)
                return Status::kIterLimit;

            // Entering column.
            int enter = -1;
            int dir = +1;
            double best = bland ? 0.0 : kDualTol;
            for (int j = 0; j < ncols; ++j) {
                const char st = state[static_cast<std::size_t>(j)];
                if (st == kBasic)
                    continue;
                if (vub[static_cast<std::size_t>(j)] -
                        vlb[static_cast<std::size_t>(j)] <=
                    1e-12)
                    continue;  // fixed
                const double dj = dvec[static_cast<std::size_t>(j)];
                int cand_dir = 0;
                if ((st == kAtLower || st == kFree) && dj < -kDualTol)
                    cand_dir = +1;
                else if ((st == kAtUpper || st == kFree) && dj > kDualTol)
                    cand_dir = -1;
                if (cand_dir == 0)
                    continue;
                if (bland) {
                    enter = j;
                    dir = cand_dir;
                    break;
                }
                if (std::abs(dj) > best) {
                    best = std::abs(dj);
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (enter < 0)
                return Status::kOptimal;

            // Ratio test over basic variables; the entering variable's own
            // bound range separately caps the step (bound flip, no pivot).
            const double range = vub[static_cast<std::size_t>(enter)] -
                                 vlb[static_cast<std::size_t>(enter)];
            double theta_rows = kInf;
            int leave_row = -1;
            bool leave_to_upper = false;
            double best_pivot = 0.0;
            for (int i = 0; i < m; ++i) {
                const double alpha = row_ptr(i)[enter];
                if (std::abs(alpha) <= kPivotTol)
                    continue;
                const int k = basic[static_cast<std::size_t>(i)];
                const double rate = dir * alpha;
                double cap;
                bool to_upper;
                if (rate > 0.0) {
                    const double l = vlb[static_cast<std::size_t>(k)];
                    if (!std::isfinite(l))
                        continue;
                    cap = (xb[static_cast<std::size_t>(i)] - l) / rate;
                    to_upper = false;
                } else {
                    const double u = vub[static_cast<std::size_t>(k)];
                    if (!std::isfinite(u))
                        continue;
                    cap = (xb[static_cast<std::size_t>(i)] - u) / rate;
                    to_upper = true;
                }
                if (cap < 0.0)
                    cap = 0.0;
                bool take;
                if (cap < theta_rows - 1e-10) {
                    take = true;
                } else if (cap < theta_rows + 1e-10 && leave_row >= 0) {
                    take = bland ? k < basic[static_cast<std::size_t>(leave_row)]
                                 : std::abs(alpha) > best_pivot;
                } else {
                    take = false;
                }
                if (take) {
                    theta_rows = std::min(theta_rows, cap);
                    leave_row = i;
                    leave_to_upper = to_upper;
                    best_pivot = std::abs(alpha);
                }
            }

            const double theta =
                std::isfinite(range) ? std::min(range, theta_rows) : theta_rows;
            if (!std::isfinite(theta))
                return phase_one ? Status::kIterLimit : Status::kUnbounded;

            const double dj = dvec[static_cast<std::size_t>(enter)];
            if (std::abs(dj * theta) <= 1e-12) {
                if (++stall > 2L * (m + 64) && !bland)
                    bland = true;
            } else {
                stall = 0;
            }

            if (std::isfinite(range) && range <= theta_rows) {
                // Bound flip: entering moves across to its other bound.
                for (int i = 0; i < m; ++i) {
                    const double alpha = row_ptr(i)[enter];
                    if (alpha != 0.0)
                        xb[static_cast<std::size_t>(i)] -= dir * alpha * range;
                }
                state[static_cast<std::size_t>(enter)] =
                    state[static_cast<std::size_t>(enter)] == kAtLower
                        ? kAtUpper
                        : kAtLower;
                continue;
            }

            // Pivot.
            const double enter_start = nb_value(enter);
            for (int i = 0; i < m; ++i) {
                if (i == leave_row)
                    continue;
                const double alpha = row_ptr(i)[enter];
                if (alpha != 0.0)
                    xb[static_cast<std::size_t>(i)] -= dir * alpha * theta;
            }
            const int leaving = basic[static_cast<std::size_t>(leave_row)];
            state[static_cast<std::size_t>(leaving)] =
                leave_to_upper ? kAtUpper : kAtLower;

            double* pr = row_ptr(leave_row);
            const double piv = pr[enter];
            const double inv = 1.0 / piv;
            for (int j = 0; j < ncols; ++j)
                pr[j] *= inv;
            pr[enter] = 1.0;
            for (int i = 0; i < m; ++i) {
                if (i == leave_row)
                    continue;
                double* r = row_ptr(i);
                const double f = r[enter];
                if (f != 0.0) {
                    for (int j = 0; j < ncols; ++j)
                        r[j] -= f * pr[j];
                    r[enter] = 0.0;
                }
            }
            {
                const double f = dvec[static_cast<std::size_t>(enter)];
                if (f != 0.0) {
                    for (int j = 0; j < ncols; ++j)
                        dvec[static_cast<std::size_t>(j)] -= f * pr[j];
                    dvec[static_cast<std::size_t>(enter)] = 0.0;
                }
            }
            xb[static_cast<std::size_t>(leave_row)] = enter_start + dir * theta;
            basic[static_cast<std::size_t>(leave_row)] = enter;
            state[static_cast<std::size_t>(enter)] = kBasic;
        }
    };

    if (art_count > 0) {
        std::vector<double> phase1_cost(static_cast<std::size_t>(ncols), 0.0);
        for (int j = art0; j < ncols; ++j)
            phase1_cost[static_cast<std::size_t>(j)] = 1.0;
        const Status st = run_phase(phase1_cost, true);
        if (st != Status::kOptimal)
            return st;
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (basic[static_cast<std::size_t>(i)] >= art0)
                infeas += std::abs(xb[static_cast<std::size_t>(i)]);
        if (infeas > kFeasTol)
            return Status::kInfeasible;
        // Pin the artificials at zero so they never re-enter.
        for (int j = art0; j < ncols; ++j) {
            vlb[static_cast<std::size_t>(j)] = 0.0;
            vub[static_cast<std::size_t>(j)] = 0.0;
        }
    }

    {
        std::vector<double> phase2_cost(static_cast<std::size_t>(ncols), 0.0);
        for (int j = 0; j < ns; ++j)
            phase2_cost[static_cast<std::size_t>(j)] =
                red.rcost[static_cast<std::size_t>(j)];
        bland = false;
        const Status st = run_phase(phase2_cost, false);
        if (st != Status::kOptimal)
            return st;
    }

    out_values.assign(static_cast<std::size_t>(ns), 0.0);
    for (int j = 0; j < ns; ++j)
        if (state[static_cast<std::size_t>(j)] != kBasic)
            out_values[static_cast<std::size_t>(j)] = nb_value(j);
    for (int i = 0; i < m; ++i)
        if (basic[static_cast<std::size_t>(i)] < ns)
            out_values[static_cast<std::size_t>(
                basic[static_cast<std::size_t>(i)])] =
                xb[static_cast<std::size_t>(i)];
    return Status::kOptimal;
}

inline Status SimplexSolver::optimize()
{
    const Reduced red = presolve();
    if (red.infeasible)
        return Status::kInfeasible;

    std::vector<double> reduced_values;
    const Status st = solve_reduced(red, reduced_values);
    if (st != Status::kOptimal)
        return st;

    const int n = variable_count();
    for (int v = 0; v < n; ++v) {
        if (red.eliminated[static_cast<std::size_t>(v)])
            values_[static_cast<std::size_t>(v)] =
                red.fixed_value[static_cast<std::size_t>(v)];
        else
            values_[static_cast<std::size_t>(v)] = reduced_values[
                static_cast<std::size_t>(red.new_id[static_cast<std::size_t>(v)])];
    }
    objective_ = 0.0;
    for (int v = 0; v < n; ++v)
        objective_ +=
            cost_[static_cast<std::size_t>(v)] * values_[static_cast<std::size_t>(v)];
    return Status::kOptimal;
}

inline std::unique_ptr<Backend> make_simplex()
{
    return std::make_unique<SimplexSolver>();
}

}  // namespace stprune::lp
