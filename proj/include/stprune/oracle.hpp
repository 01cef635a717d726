// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include "stprune/graph.hpp"
#include "stprune/instance.hpp"

namespace stprune {

struct OracleResult {
    Weight objective;
    std::vector<int> tree_edges;  // sorted edge ids
};

namespace detail {

/// All-pairs shortest paths with per-source parent edges; exact int64
/// distances. Deterministic: ties resolved by first settle, neighbors in
/// edge order.
struct ShortestPaths {
    std::vector<std::vector<std::int64_t>> dist;
    std::vector<std::vector<int>> via_edge;  // edge reaching column node

    explicit ShortestPaths(const SteinerInstance& inst)
    {
        const int n = inst.node_count();
        const AdjacencyList adj(inst);
        constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
        dist.assign(static_cast<std::size_t>(n),
                    std::vector<std::int64_t>(static_cast<std::size_t>(n), kInf));
        via_edge.assign(static_cast<std::size_t>(n),
                        std::vector<int>(static_cast<std::size_t>(n), -1));
        for (int s = 0; s < n; ++s) {
            auto& d = dist[static_cast<std::size_t>(s)];
            auto& p = via_edge[static_cast<std::size_t>(s)];
            using Item = std::pair<std::int64_t, int>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
            d[static_cast<std::size_t>(s)] = 0;
            pq.emplace(0, s);
            while (!pq.empty()) {
                const auto [dd, v] = pq.top();
                pq.pop();
                if (dd > d[static_cast<std::size_t>(v)])
                    continue;
                for (const auto& [w, e] : adj.at[static_cast<std::size_t>(v)]) {
                    const std::int64_t nd = dd + inst.edge(e).weight.micros();
                    if (nd < d[static_cast<std::size_t>(w)]) {
                        d[static_cast<std::size_t>(w)] = nd;
                        p[static_cast<std::size_t>(w)] = e;
                        pq.emplace(nd, w);
                    }
                }
            }
        }
    }

    /// Edge ids along the shortest path from a to b.
    void collect_path(const SteinerInstance& inst, int a, int b,
                      std::set<int>& out) const
    {
        int cur = b;
        while (cur != a) {
            const int e = via_edge[static_cast<std::size_t>(a)]
                                  [static_cast<std::size_t>(cur)];
            if (e < 0)
                throw Error("oracle: nodes not connected");
            out.insert(e);
            const Edge& ed = inst.edge(e);
            cur = ed.u == cur ? ed.v : ed.u;
        }
    }
};

}  // namespace detail

/** Exact minimum Steiner tree by Dreyfus-Wagner dynamic programming,
 * O(3^t * n + 2^t * n^2). Terminal count capped at 16. Backtracking takes
 * the lexicographically smallest (subset, vertex) choice on ties, so the
 * recovered tree is deterministic.
 */
inline OracleResult dreyfus_wagner(const SteinerInstance& inst)
{
    const auto& terminals = inst.terminals();
    const int t = static_cast<int>(terminals.size());
    if (t > 16)
        throw Error("dreyfus_wagner: terminal count " + std::to_string(t) +
                    " exceeds cap 16");
    if (!graph_connected(inst))
        throw Error("dreyfus_wagner: graph is disconnected");
    if (t == 1)
        return OracleResult{Weight{}, {}};

    const int n = inst.node_count();
    const detail::ShortestPaths sp(inst);

    if (t == 2) {
        std::set<int> edges;
        sp.collect_path(inst, terminals[0], terminals[1], edges);
        OracleResult r;
        r.objective = Weight::from_micros(
            sp.dist[static_cast<std::size_t>(terminals[0])]
                   [static_cast<std::size_t>(terminals[1])]);
        r.tree_edges.assign(edges.begin(), edges.end());
        return r;
    }

    // DP over subsets of the first t-1 terminals; the last terminal is the
    // final attachment point.
    const int base_count = t - 1;
    const int full = (1 << base_count) - 1;
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    const std::size_t n_sz = static_cast<std::size_t>(n);
    std::vector<std::vector<std::int64_t>> dp(
        static_cast<std::size_t>(full + 1),
        std::vector<std::int64_t>(n_sz, kInf));
    // Choice per (mask, v): junction node u and split submask (0 = none:
    // the mask is a singleton reached by a plain path).
    struct Choice {
        int junction = -1;
        int split = 0;
    };
    std::vector<std::vector<Choice>> choice(
        static_cast<std::size_t>(full + 1), std::vector<Choice>(n_sz));

    for (int i = 0; i < base_count; ++i) {
        const int q = terminals[static_cast<std::size_t>(i)];
        auto& row = dp[static_cast<std::size_t>(1 << i)];
        auto& ch = choice[static_cast<std::size_t>(1 << i)];
        for (int v = 0; v < n; ++v) {
            row[static_cast<std::size_t>(v)] =
                sp.dist[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)];
            ch[static_cast<std::size_t>(v)] = Choice{q, 0};
        }
    }

    std::vector<std::int64_t> merged(n_sz);
    std::vector<int> merged_split(n_sz);
    for (int mask = 1; mask <= full; ++mask) {
        if ((mask & (mask - 1)) == 0)
            continue;  // singleton handled above
        // Merge step at every node: best split into two nonempty parts.
        // Canonical halving: the part containing the lowest set bit.
        const int low = mask & (-mask);
        for (int v = 0; v < n; ++v) {
            merged[static_cast<std::size_t>(v)] = kInf;
            merged_split[static_cast<std::size_t>(v)] = 0;
        }
        for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
            if (!(sub & low))
                continue;
            const auto& a = dp[static_cast<std::size_t>(sub)];
            const auto& b = dp[static_cast<std::size_t>(mask ^ sub)];
            for (int v = 0; v < n; ++v) {
                if (a[static_cast<std::size_t>(v)] >= kInf ||
                    b[static_cast<std::size_t>(v)] >= kInf)
                    continue;
                const std::int64_t cand = a[static_cast<std::size_t>(v)] +
                                          b[static_cast<std::size_t>(v)];
                if (cand < merged[static_cast<std::size_t>(v)]) {
                    merged[static_cast<std::size_t>(v)] = cand;
                    merged_split[static_cast<std::size_t>(v)] = sub;
                }
            }
        }
        // Path-closure step: attach the merged tree at u and walk to v.
        auto& row = dp[static_cast<std::size_t>(mask)];
        auto& ch = choice[static_cast<std::size_t>(mask)];
        for (int v = 0; v < n; ++v) {
            for (int u = 0; u < n; ++u) {
                if (merged[static_cast<std::size_t>(u)] >= kInf)
                    continue;
                const std::int64_t cand =
                    merged[static_cast<std::size_t>(u)] +
                    sp.dist[static_cast<std::size_t>(u)]
                           [static_cast<std::size_t>(v)];
                if (cand < row[static_cast<std::size_t>(v)]) {
                    row[static_cast<std::size_t>(v)] = cand;
                    ch[static_cast<std::size_t>(v)] =
                        Choice{u, merged_split[static_cast<std::size_t>(u)]};
                }
            }
        }
    }

    const int anchor = terminals[static_cast<std::size_t>(t - 1)];
    const std::int64_t best =
        dp[static_cast<std::size_t>(full)][static_cast<std::size_t>(anchor)];

    // Recover edges.
    std::set<int> edges;
    struct Frame {
        int mask;
        int v;
    };
    std::vector<Frame> work{{full, anchor}};
    while (!work.empty()) {
        const auto [mask, v] = work.back();
        work.pop_back();
        const Choice c =
            choice[static_cast<std::size_t>(mask)][static_cast<std::size_t>(v)];
        if ((mask & (mask - 1)) == 0) {
            sp.collect_path(inst, c.junction, v, edges);
            continue;
        }
        sp.collect_path(inst, c.junction, v, edges);
        work.push_back(Frame{c.split, c.junction});
        work.push_back(Frame{mask ^ c.split, c.junction});
    }

    OracleResult r;
    r.objective = Weight::from_micros(best);
    r.tree_edges.assign(edges.begin(), edges.end());

    // The union of parts of an optimal decomposition is an optimal tree;
    // anything else signals a bug, so verify.
    Weight sum;
    for (int e : r.tree_edges)
        sum += inst.edge(e).weight;
    if (sum != r.objective || !terminals_connected(inst, r.tree_edges))
        throw Error("dreyfus_wagner: reconstruction mismatch");
    return r;
}

}  // namespace stprune
