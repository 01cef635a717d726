// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stprune/centrality.hpp"
#include "stprune/instance.hpp"
#include "stprune/milp.hpp"

namespace stprune {

constexpr int kFeatureCount = 12;

enum FeatureIndex : int {
    kFeatLpValue = 0,
    kFeatWeightNorm,
    kFeatWeightStd,
    kFeatWeightChi2,
    kFeatLocalRankMin,
    kFeatLocalRankMax,
    kFeatDegreeMin,
    kFeatDegreeMax,
    kFeatBetweennessMin,
    kFeatBetweennessMax,
    kFeatEigenMin,
    kFeatEigenMax,
};

inline const std::array<std::string, kFeatureCount>& feature_names()
{
    static const std::array<std::string, kFeatureCount> names = {
        "lp_value",        "weight_norm",     "weight_std",
        "weight_chi2",     "local_rank_min",  "local_rank_max",
        "degree_min",      "degree_max",      "betweenness_min",
        "betweenness_max", "eigen_min",       "eigen_max",
    };
    return names;
}

/// One labeled (or unlabeled) feature vector per undirected edge.
struct EdgeFeatureRow {
    std::string instance;
    int edge_id = 0;
    std::array<double, kFeatureCount> features{};
    std::optional<int> label;
};

/** Per-edge LP relaxation feature: the larger of the two arc values,
 * clamped to [0,1].
 */
inline std::vector<double> lp_feature(const SteinerInstance& inst,
                                      const SolveResult& relaxed_result)
{
    if (relaxed_result.mode != Mode::kRelaxed)
        throw Error("lp_feature requires a relaxed-mode result");
    if (relaxed_result.status != SolveStatus::kOptimal)
        throw Error("lp_feature requires an optimal LP result");
    std::vector<double> out(static_cast<std::size_t>(inst.edge_count()));
    for (int e = 0; e < inst.edge_count(); ++e) {
        const auto [a1, a2] = DirectedInstance::arcs_of_edge(e);
        const double v =
            std::max(relaxed_result.y_values[static_cast<std::size_t>(a1)],
                     relaxed_result.y_values[static_cast<std::size_t>(a2)]);
        out[static_cast<std::size_t>(e)] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

struct WeightFeatures {
    std::vector<double> norm;  // (w - min) / (max - min)
    std::vector<double> std;   // (w - mean) / population stddev
    std::vector<double> chi2;  // (norm - mean_norm)^2 / mean_norm
};

/// Degenerate inputs (all weights equal) map every column to 0.
inline WeightFeatures weight_features(const SteinerInstance& inst)
{
    const int m = inst.edge_count();
    WeightFeatures out;
    out.norm.assign(static_cast<std::size_t>(m), 0.0);
    out.std.assign(static_cast<std::size_t>(m), 0.0);
    out.chi2.assign(static_cast<std::size_t>(m), 0.0);
    if (m == 0)
        return out;

    double wmin = inst.edge(0).weight.value();
    double wmax = wmin;
    double mean = 0.0;
    for (const Edge& e : inst.edges()) {
        const double w = e.weight.value();
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
        mean += w;
    }
    mean /= m;
    double var = 0.0;
    for (const Edge& e : inst.edges()) {
        const double d = e.weight.value() - mean;
        var += d * d;
    }
    var /= m;
    const double stddev = std::sqrt(var);

    if (wmax > wmin) {
        for (int e = 0; e < m; ++e)
            out.norm[static_cast<std::size_t>(e)] =
                (inst.edge(e).weight.value() - wmin) / (wmax - wmin);
        double mean_norm = 0.0;
        for (double v : out.norm)
            mean_norm += v;
        mean_norm /= m;
        if (mean_norm > 0.0)
            for (int e = 0; e < m; ++e) {
                const double d =
                    out.norm[static_cast<std::size_t>(e)] - mean_norm;
                out.chi2[static_cast<std::size_t>(e)] = d * d / mean_norm;
            }
    }
    if (stddev > 0.0)
        for (int e = 0; e < m; ++e)
            out.std[static_cast<std::size_t>(e)] =
                (inst.edge(e).weight.value() - mean) / stddev;
    return out;
}

struct LocalRanks {
    std::vector<int> rank_min;
    std::vector<int> rank_max;
};

/** Rank of each edge in the weight-sorted incidence list of its endpoints:
 * 1 + number of strictly lighter incident edges (ties share the lower
 * rank). rank_min/rank_max aggregate over the two endpoints.
 */
inline LocalRanks local_rank(const SteinerInstance& inst)
{
    const int m = inst.edge_count();
    const AdjacencyList adj(inst);
    LocalRanks out;
    out.rank_min.assign(static_cast<std::size_t>(m), 0);
    out.rank_max.assign(static_cast<std::size_t>(m), 0);
    auto rank_at = [&](int node, int edge) {
        int lighter = 0;
        for (const auto& [w, e] : adj.at[static_cast<std::size_t>(node)])
            if (inst.edge(e).weight < inst.edge(edge).weight)
                ++lighter;
        return 1 + lighter;
    };
    for (int e = 0; e < m; ++e) {
        const int ru = rank_at(inst.edge(e).u, e);
        const int rv = rank_at(inst.edge(e).v, e);
        out.rank_min[static_cast<std::size_t>(e)] = std::min(ru, rv);
        out.rank_max[static_cast<std::size_t>(e)] = std::max(ru, rv);
    }
    return out;
}

/** One row per undirected edge in fixed column order. label = 1 iff the
 * edge is in the given optimal tree (labels absent when no tree given).
 */
inline std::vector<EdgeFeatureRow> assemble_rows(
    const SteinerInstance& inst, const std::vector<double>& lp,
    const WeightFeatures& weights, const LocalRanks& ranks,
    const CentralityTable& centralities,
    const std::optional<std::vector<int>>& optimal_tree = std::nullopt)
{
    const int m = inst.edge_count();
    if (static_cast<int>(lp.size()) != m ||
        static_cast<int>(weights.norm.size()) != m ||
        static_cast<int>(ranks.rank_min.size()) != m)
        throw Error("assemble_rows: feature maps must cover every edge");

    std::vector<bool> in_tree(static_cast<std::size_t>(m), false);
    if (optimal_tree)
        for (int e : *optimal_tree)
            in_tree[static_cast<std::size_t>(e)] = true;

    std::vector<EdgeFeatureRow> rows;
    rows.reserve(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
        EdgeFeatureRow row;
        row.instance = inst.name();
        row.edge_id = e;
        const Edge& ed = inst.edge(e);
        const auto at = [&](const std::vector<double>& v, int node) {
            return v[static_cast<std::size_t>(node)];
        };
        row.features[kFeatLpValue] = lp[static_cast<std::size_t>(e)];
        row.features[kFeatWeightNorm] = weights.norm[static_cast<std::size_t>(e)];
        row.features[kFeatWeightStd] = weights.std[static_cast<std::size_t>(e)];
        row.features[kFeatWeightChi2] = weights.chi2[static_cast<std::size_t>(e)];
        row.features[kFeatLocalRankMin] =
            static_cast<double>(ranks.rank_min[static_cast<std::size_t>(e)]);
        row.features[kFeatLocalRankMax] =
            static_cast<double>(ranks.rank_max[static_cast<std::size_t>(e)]);
        row.features[kFeatDegreeMin] =
            std::min(at(centralities.degree, ed.u), at(centralities.degree, ed.v));
        row.features[kFeatDegreeMax] =
            std::max(at(centralities.degree, ed.u), at(centralities.degree, ed.v));
        row.features[kFeatBetweennessMin] = std::min(
            at(centralities.betweenness, ed.u), at(centralities.betweenness, ed.v));
        row.features[kFeatBetweennessMax] = std::max(
            at(centralities.betweenness, ed.u), at(centralities.betweenness, ed.v));
        row.features[kFeatEigenMin] = std::min(at(centralities.eigenvector, ed.u),
                                               at(centralities.eigenvector, ed.v));
        row.features[kFeatEigenMax] = std::max(at(centralities.eigenvector, ed.u),
                                               at(centralities.eigenvector, ed.v));
        if (optimal_tree)
            row.label = in_tree[static_cast<std::size_t>(e)] ? 1 : 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::string format_g9(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace detail

/// CSV with a fixed header; floats at 9 significant digits; label column
/// empty for unlabeled rows.
inline void write_feature_csv(std::ostream& out,
                              const std::vector<EdgeFeatureRow>& rows)
{
    out << "instance,edge_id";
    for (const std::string& name : feature_names())
        out << "," << name;
    out << ",label\n";
    for (const EdgeFeatureRow& row : rows) {
        out << row.instance << "," << row.edge_id;
        for (double f : row.features)
            out << "," << detail::format_g9(f);
        out << ",";
        if (row.label)
            out << *row.label;
        out << "\n";
    }
}

inline std::vector<EdgeFeatureRow> read_feature_csv(std::istream& in)
{
    std::vector<EdgeFeatureRow> rows;
    std::string line;
    if (!std::getline(in, line))
        throw Error("feature CSV: empty input");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(
                start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (cells.size() != 2 + kFeatureCount + 1)
            throw Error("feature CSV line " + std::to_string(line_no) +
                        ": expected " + std::to_string(2 + kFeatureCount + 1) +
                        " columns");
        EdgeFeatureRow row;
        row.instance = cells[0];
        row.edge_id = std::stoi(cells[1]);
        for (int f = 0; f < kFeatureCount; ++f)
            row.features[static_cast<std::size_t>(f)] =
                std::stod(cells[static_cast<std::size_t>(2 + f)]);
        const std::string& label = cells.back();
        if (!label.empty())
            row.label = std::stoi(label);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace stprune
