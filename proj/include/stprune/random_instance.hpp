// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stprune/instance.hpp"

namespace stprune {

namespace detail {

/// Bounded draw that only uses raw mt19937_64 output, so generated
/// instances are identical across standard libraries.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n)
{
    return rng() % n;
}

}  // namespace detail

/** Random connected instance: a random attachment tree plus independent
 * extra edges with probability edge_prob, integer weights uniform in
 * [weight_min, weight_max], t distinct random terminals. Deterministic in
 * the seed.
 */
inline SteinerInstance random_instance(int n, double edge_prob, int t,
                                       int weight_min, int weight_max,
                                       std::uint64_t seed,
                                       std::string name = "")
{
    if (n < 2)
        throw Error("random_instance: need n >= 2");
    if (t < 1 || t > n)
        throw Error("random_instance: need 1 <= t <= n");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw Error("random_instance: edge_prob outside [0,1]");
    if (weight_min < 0 || weight_max < weight_min)
        throw Error("random_instance: bad weight range");

    std::mt19937_64 rng(seed);
    const auto weight_span =
        static_cast<std::uint64_t>(weight_max - weight_min) + 1;
    auto draw_weight = [&] {
        return Weight::from_int(weight_min +
                                static_cast<std::int64_t>(
                                    detail::bounded(rng, weight_span)));
    };

    std::vector<Edge> edges;
    std::vector<std::vector<bool>> present(
        static_cast<std::size_t>(n),
        std::vector<bool>(static_cast<std::size_t>(n), false));
    // Random attachment spanning tree keeps the graph connected.
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(
            detail::bounded(rng, static_cast<std::uint64_t>(v)));
        edges.push_back(Edge{u, v, draw_weight()});
        present[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
        present[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
    }
    if (edge_prob > 0.0) {
        const auto threshold = static_cast<std::uint64_t>(
            edge_prob * 9007199254740992.0);  // 2^53
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                if (present[static_cast<std::size_t>(u)]
                           [static_cast<std::size_t>(v)])
                    continue;
                if ((rng() >> 11) < threshold)
                    edges.push_back(Edge{u, v, draw_weight()});
            }
    }

    std::vector<int> nodes(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        nodes[static_cast<std::size_t>(v)] = v;
    for (int i = 0; i < t; ++i) {
        const auto j = i + static_cast<int>(detail::bounded(
                               rng, static_cast<std::uint64_t>(n - i)));
        std::swap(nodes[static_cast<std::size_t>(i)],
                  nodes[static_cast<std::size_t>(j)]);
    }
    std::vector<int> terminals(nodes.begin(), nodes.begin() + t);

    if (name.empty())
        name = "rnd-n" + std::to_string(n) + "-t" + std::to_string(t) + "-s" +
               std::to_string(seed);
    return SteinerInstance(std::move(name), n, std::move(edges),
                           std::move(terminals));
}

}  // namespace stprune
