// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <thread>
#include <vector>

#include "stprune/graph.hpp"
#include "stprune/instance.hpp"

namespace stprune {

/// Per-node centrality values. Degree and betweenness are normalized to
/// [0,1]; the eigenvector column has unit Euclidean norm.
struct CentralityTable {
    std::vector<double> degree;
    std::vector<double> betweenness;
    std::vector<double> eigenvector;
};

/// value(v) = deg(v) / (n-1).
inline std::vector<double> degree_centrality(const SteinerInstance& inst)
{
    const int n = inst.node_count();
    if (n < 2)
        throw Error("degree centrality undefined on single-node graph");
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const Edge& e : inst.edges()) {
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        out[static_cast<std::size_t>(v)] =
            static_cast<double>(deg[static_cast<std::size_t>(v)]) / (n - 1);
    return out;
}

namespace detail {

/// Brandes accumulation from one source over weighted shortest paths.
/// Distances are exact int64 micros, so tie detection is exact.
inline void betweenness_from_source(const SteinerInstance& inst,
                                    const AdjacencyList& adj, int source,
                                    std::vector<double>& acc)
{
    const int n = inst.node_count();
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> dist(static_cast<std::size_t>(n), kInf);
    std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<bool> settled(static_cast<std::size_t>(n), false);

    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(source)] = 0;
    sigma[static_cast<std::size_t>(source)] = 1.0;
    pq.emplace(0, source);
    while (!pq.empty()) {
        const auto [d, v] = pq.top();
        pq.pop();
        if (settled[static_cast<std::size_t>(v)])
            continue;
        settled[static_cast<std::size_t>(v)] = true;
        order.push_back(v);
        for (const auto& [w, e] : adj.at[static_cast<std::size_t>(v)]) {
            const std::int64_t nd = d + inst.edge(e).weight.micros();
            if (nd < dist[static_cast<std::size_t>(w)]) {
                dist[static_cast<std::size_t>(w)] = nd;
                sigma[static_cast<std::size_t>(w)] =
                    sigma[static_cast<std::size_t>(v)];
                preds[static_cast<std::size_t>(w)].assign(1, v);
                pq.emplace(nd, w);
            } else if (nd == dist[static_cast<std::size_t>(w)]) {
                sigma[static_cast<std::size_t>(w)] +=
                    sigma[static_cast<std::size_t>(v)];
                preds[static_cast<std::size_t>(w)].push_back(v);
            }
        }
    }

    std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int w = *it;
        for (int v : preds[static_cast<std::size_t>(w)])
            delta[static_cast<std::size_t>(v)] +=
                sigma[static_cast<std::size_t>(v)] /
                sigma[static_cast<std::size_t>(w)] *
                (1.0 + delta[static_cast<std::size_t>(w)]);
        if (w != source)
            acc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
    }
}

}  // namespace detail

/** Weighted shortest-path betweenness (exact Brandes accumulation),
 * normalized by (n-1)(n-2)/2 for undirected graphs.
 *
 * Sources are processed in fixed blocks that may run on several threads;
 * block partials merge in block order, so results are bit-identical for
 * any thread count.
 */
inline std::vector<double> betweenness_centrality(const SteinerInstance& inst,
                                                  int threads = 1)
{
    const int n = inst.node_count();
    for (const Edge& e : inst.edges())
        if (e.weight <= Weight{})
            throw Error("betweenness requires positive edge weights");

    const AdjacencyList adj(inst);
    constexpr int kBlock = 32;
    const int blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partial(
        static_cast<std::size_t>(blocks),
        std::vector<double>(static_cast<std::size_t>(n), 0.0));

    auto run_block = [&](int b) {
        const int lo = b * kBlock;
        const int hi = std::min(n, lo + kBlock);
        for (int s = lo; s < hi; ++s)
            detail::betweenness_from_source(inst, adj, s,
                                            partial[static_cast<std::size_t>(b)]);
    };

    if (threads <= 1) {
        for (int b = 0; b < blocks; ++b)
            run_block(b);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < blocks;
                     b = next.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool)
            th.join();
    }

    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    for (int b = 0; b < blocks; ++b)
        for (int v = 0; v < n; ++v)
            acc[static_cast<std::size_t>(v)] +=
                partial[static_cast<std::size_t>(b)][static_cast<std::size_t>(v)];

    // Each unordered pair was counted from both endpoints; the undirected
    // normalizer is (n-1)(n-2)/2, giving acc / ((n-1)(n-2)).
    if (n > 2) {
        const double scale =
            1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
        for (double& x : acc)
            x *= scale;
    }
    return acc;
}

/** Principal eigenvector of the unweighted adjacency matrix.
 *
 * Power iteration on A+I (the shift keeps bipartite graphs from
 * oscillating); converged when the successive-iterate L1 change drops
 * below tol*n. Result has unit Euclidean norm and positive entries on
 * connected graphs.
 */
inline std::vector<double> eigenvector_centrality(const SteinerInstance& inst,
                                                  double tol = 1e-8,
                                                  int max_iter = 1000)
{
    const int n = inst.node_count();
    const AdjacencyList adj(inst);
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int it = 0; it < max_iter; ++it) {
        for (int v = 0; v < n; ++v) {
            double s = x[static_cast<std::size_t>(v)];
            for (const auto& [w, e] : adj.at[static_cast<std::size_t>(v)])
                s += x[static_cast<std::size_t>(w)];
            next[static_cast<std::size_t>(v)] = s;
        }
        double norm = 0.0;
        for (double s : next)
            norm += s * s;
        norm = std::sqrt(norm);
        if (norm == 0.0)
            norm = 1.0;
        double change = 0.0;
        for (int v = 0; v < n; ++v) {
            next[static_cast<std::size_t>(v)] /= norm;
            change += std::abs(next[static_cast<std::size_t>(v)] -
                               x[static_cast<std::size_t>(v)]);
        }
        x.swap(next);
        if (change < tol * n)
            return x;
    }
    throw Error("eigenvector centrality did not converge in " +
                std::to_string(max_iter) + " iterations");
}

inline CentralityTable compute_centralities(const SteinerInstance& inst,
                                            int threads = 1, double tol = 1e-8,
                                            int max_iter = 1000)
{
    CentralityTable table;
    table.degree = degree_centrality(inst);
    table.betweenness = betweenness_centrality(inst, threads);
    table.eigenvector = eigenvector_centrality(inst, tol, max_iter);
    return table;
}

}  // namespace stprune
