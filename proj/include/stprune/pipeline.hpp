// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stprune/features.hpp"
#include "stprune/linear_model.hpp"
#include "stprune/milp.hpp"

namespace stprune {

/// LP values at or below this are "zero" for pruning purposes.
constexpr double kLpZeroTol = 1e-6;

enum class MaskSource { kClassifier, kLpBaseline };

inline const char* to_string(MaskSource s)
{
    return s == MaskSource::kClassifier ? "classifier" : "lp_baseline";
}

/** Partition of the edge set into pruned and retained, with the
 * LP-support edges that the feasibility repair forced back in.
 */
struct PruneMask {
    std::vector<int> pruned;
    std::vector<int> retained;
    std::vector<int> repair_added;  // subset of retained
    double threshold = 0.0;
    MaskSource source = MaskSource::kClassifier;

    int edge_count() const
    {
        return static_cast<int>(pruned.size() + retained.size());
    }
    double prune_rate() const
    {
        const int total = edge_count();
        return total == 0 ? 0.0
                          : static_cast<double>(pruned.size()) / total;
    }
};

/** Classifier mask with feasibility repair: prune edges scoring below the
 * threshold unless they carry LP support; LP-support edges are always
 * retained (repair-added when their score fell below the threshold).
 */
inline PruneMask make_mask(const std::vector<double>& scores, double threshold,
                           const std::vector<double>& lp)
{
    if (scores.size() != lp.size())
        throw Error("make_mask: scores and lp must cover the same edges");
    PruneMask mask;
    mask.threshold = threshold;
    mask.source = MaskSource::kClassifier;
    for (int e = 0; e < static_cast<int>(scores.size()); ++e) {
        const bool low_score = scores[static_cast<std::size_t>(e)] < threshold;
        const bool lp_zero = lp[static_cast<std::size_t>(e)] <= kLpZeroTol;
        if (low_score && lp_zero) {
            mask.pruned.push_back(e);
        } else {
            mask.retained.push_back(e);
            if (low_score)
                mask.repair_added.push_back(e);
        }
    }
    return mask;
}

/// Baseline of pruning purely on the LP value; no repair beyond retaining
/// edges at or above the threshold.
inline PruneMask lp_baseline_mask(const std::vector<double>& lp,
                                  double lp_threshold)
{
    PruneMask mask;
    mask.threshold = lp_threshold;
    mask.source = MaskSource::kLpBaseline;
    for (int e = 0; e < static_cast<int>(lp.size()); ++e) {
        if (lp[static_cast<std::size_t>(e)] < lp_threshold)
            mask.pruned.push_back(e);
        else
            mask.retained.push_back(e);
    }
    return mask;
}

/** LP baseline at a matched prune rate: prune exactly prune_count edges,
 * smallest LP value first (edge id breaks ties). Thresholding alone cannot
 * hit arbitrary rates because all LP-zero edges share one value.
 */
inline PruneMask lp_baseline_mask_matched(const std::vector<double>& lp,
                                          int prune_count)
{
    const int m = static_cast<int>(lp.size());
    prune_count = std::clamp(prune_count, 0, m);
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e)
        order[static_cast<std::size_t>(e)] = e;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return lp[static_cast<std::size_t>(a)] < lp[static_cast<std::size_t>(b)];
    });
    PruneMask mask;
    mask.source = MaskSource::kLpBaseline;
    mask.pruned.assign(order.begin(), order.begin() + prune_count);
    mask.retained.assign(order.begin() + prune_count, order.end());
    std::sort(mask.pruned.begin(), mask.pruned.end());
    std::sort(mask.retained.begin(), mask.retained.end());
    mask.threshold =
        prune_count == 0 ? 0.0
                         : lp[static_cast<std::size_t>(
                               order[static_cast<std::size_t>(prune_count - 1)])];
    return mask;
}

/// End-to-end result for one instance and one solve configuration.
struct SolveReport {
    std::string instance;
    std::string mode;  // "original" | "hard" | "soft(K)"
    double objective = 0.0;
    std::optional<double> optimal_objective;
    std::optional<double> objective_increase_pct;
    double feature_time = 0.0;  // seconds
    double solve_time = 0.0;    // seconds
    std::optional<double> original_time;
    std::optional<double> runtime_decrease_pct;
    double prune_rate = 0.0;
    std::vector<int> tree_edges;
    std::string status;
};

namespace detail {

inline std::vector<int> arcs_of_edges(const std::vector<int>& edges)
{
    std::vector<int> arcs;
    arcs.reserve(edges.size() * 2);
    for (int e : edges) {
        const auto [a1, a2] = DirectedInstance::arcs_of_edge(e);
        arcs.push_back(a1);
        arcs.push_back(a2);
    }
    return arcs;
}

inline SolveReport report_from_result(const SteinerInstance& inst,
                                      std::string mode, const SolveResult& r,
                                      double prune_rate)
{
    SolveReport report;
    report.instance = inst.name();
    report.mode = std::move(mode);
    report.status = to_string(r.status);
    report.solve_time = r.wall_time;
    report.prune_rate = prune_rate;
    if (r.status == SolveStatus::kOptimal ||
        (r.status == SolveStatus::kTimeLimit && r.exact_objective)) {
        report.objective = r.exact_objective ? r.exact_objective->value()
                                             : r.objective;
        if (r.status == SolveStatus::kOptimal)
            report.tree_edges = extract_tree(inst, r);
    }
    return report;
}

}  // namespace detail

/// Solve with pruned-edge variables fixed to 0 (both arcs per edge).
inline SolveReport solve_hard(const SteinerInstance& inst,
                              const PruneMask& mask, double time_limit,
                              const SolverOptions& base_opts = {})
{
    SolverOptions opts = base_opts;
    opts.time_limit = time_limit;
    if (inst.terminals().size() == 1) {
        SolveResult r = solve_instance(inst, Mode::kIntegral, opts);
        return detail::report_from_result(inst, "hard", r, mask.prune_rate());
    }
    const DirectedInstance d = to_directed(inst, inst.terminals().front());
    FlowModel model = build_model(d, Mode::kIntegral);
    model.fix_arcs_to_zero(detail::arcs_of_edges(mask.pruned));
    const SolveResult r = solve(model, inst, opts);
    return detail::report_from_result(inst, "hard", r, mask.prune_rate());
}

/// Solve with the soft budget row: at most `budget` pruned edges may enter
/// the solution; all variables stay in the model.
inline SolveReport solve_soft(const SteinerInstance& inst,
                              const PruneMask& mask, int budget,
                              double time_limit,
                              const SolverOptions& base_opts = {})
{
    SolverOptions opts = base_opts;
    opts.time_limit = time_limit;
    const std::string mode = "soft(" + std::to_string(budget) + ")";
    if (inst.terminals().size() == 1) {
        SolveResult r = solve_instance(inst, Mode::kIntegral, opts);
        return detail::report_from_result(inst, mode, r, mask.prune_rate());
    }
    const DirectedInstance d = to_directed(inst, inst.terminals().front());
    FlowModel model = build_model(d, Mode::kIntegral);
    model.add_soft_budget(detail::arcs_of_edges(mask.pruned), budget);
    const SolveResult r = solve(model, inst, opts);
    return detail::report_from_result(inst, mode, r, mask.prune_rate());
}

/** Fill the Table-2 metrics of `report` relative to the original run:
 * objective increase percentage and runtime decrease percentage (pruned
 * runtime = feature time + solve time).
 */
inline void evaluate(SolveReport& report, const SolveReport& original)
{
    if (report.instance != original.instance)
        throw Error("evaluate: reports describe different instances");
    report.optimal_objective = original.objective;
    if (original.objective != 0.0)
        report.objective_increase_pct = 100.0 *
                                        (report.objective - original.objective) /
                                        original.objective;
    else
        report.objective_increase_pct = 0.0;
    const double t_orig = original.solve_time;
    report.original_time = t_orig;
    if (t_orig > 0.0)
        report.runtime_decrease_pct =
            100.0 * (t_orig - (report.feature_time + report.solve_time)) /
            t_orig;
}

inline nlohmann::json report_to_json(const SolveReport& r)
{
    nlohmann::json j;
    j["instance"] = r.instance;
    j["mode"] = r.mode;
    j["objective"] = r.objective;
    if (r.optimal_objective)
        j["optimal_objective"] = *r.optimal_objective;
    if (r.objective_increase_pct)
        j["objective_increase_pct"] = *r.objective_increase_pct;
    j["feature_time"] = r.feature_time;
    j["solve_time"] = r.solve_time;
    if (r.original_time)
        j["original_time"] = *r.original_time;
    if (r.runtime_decrease_pct)
        j["runtime_decrease_pct"] = *r.runtime_decrease_pct;
    j["prune_rate"] = r.prune_rate;
    j["tree_edges"] = r.tree_edges;
    j["status"] = r.status;
    return j;
}

inline SolveReport report_from_json(const nlohmann::json& j)
{
    SolveReport r;
    r.instance = j.at("instance").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.objective = j.at("objective").get<double>();
    if (j.contains("optimal_objective"))
        r.optimal_objective = j["optimal_objective"].get<double>();
    if (j.contains("objective_increase_pct"))
        r.objective_increase_pct = j["objective_increase_pct"].get<double>();
    r.feature_time = j.at("feature_time").get<double>();
    r.solve_time = j.at("solve_time").get<double>();
    if (j.contains("original_time"))
        r.original_time = j["original_time"].get<double>();
    if (j.contains("runtime_decrease_pct"))
        r.runtime_decrease_pct = j["runtime_decrease_pct"].get<double>();
    r.prune_rate = j.at("prune_rate").get<double>();
    r.tree_edges = j.at("tree_edges").get<std::vector<int>>();
    r.status = j.at("status").get<std::string>();
    return r;
}

/// Everything feature-related computed once per instance.
struct InstanceFeatures {
    std::vector<EdgeFeatureRow> rows;  // unlabeled
    std::vector<double> lp_values;     // per edge
    CentralityTable centralities;
    double feature_time = 0.0;  // LP relaxation + centralities + assembly
    bool lp_integral = false;
};

/** Compute the full per-edge feature block. Rejects disconnected graphs
 * (the repair guarantee needs a connected input). The LP relaxation uses
 * the canonical root (lowest terminal).
 */
inline InstanceFeatures compute_instance_features(
    const SteinerInstance& inst, const SolverOptions& opts = {},
    int threads = 1)
{
    if (!graph_connected(inst))
        throw Error("instance '" + inst.name() +
                    "' is disconnected; the prune pipeline requires a "
                    "connected graph");
    const auto start = std::chrono::steady_clock::now();
    InstanceFeatures out;
    const SolveResult relaxed = solve_instance(inst, Mode::kRelaxed, opts);
    if (relaxed.status != SolveStatus::kOptimal)
        throw Error("LP relaxation failed on '" + inst.name() + "': " +
                    to_string(relaxed.status));
    out.lp_values = lp_feature(inst, relaxed);
    out.lp_integral = true;
    for (double v : out.lp_values)
        if (v > kLpZeroTol && v < 1.0 - kLpZeroTol)
            out.lp_integral = false;
    out.centralities = compute_centralities(inst, threads);
    out.rows = assemble_rows(inst, out.lp_values, weight_features(inst),
                             local_rank(inst), out.centralities);
    out.feature_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return out;
}

}  // namespace stprune
