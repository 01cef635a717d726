// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stprune/weight.hpp"

namespace stprune {

/// Undirected edge between 0-based node ids. Node ids are 1-based only in
/// the STP text format; conversion happens at the parser boundary.
struct Edge {
    int u = 0;
    int v = 0;
    Weight weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/** An undirected weighted graph plus a nonempty terminal set.
 *
 * Immutable after construction; the constructor enforces all invariants
 * (ids in range, no self-loops or duplicate edges, nonnegative weights,
 * nonempty terminal set), so any instance in circulation is valid.
 */
class SteinerInstance {
public:
    SteinerInstance(std::string name,
                    int node_count,
                    std::vector<Edge> edges,
                    std::vector<int> terminals)
        : name_(std::move(name)),
          node_count_(node_count),
          edges_(std::move(edges)),
          terminals_(std::move(terminals))
    {
        if (node_count_ <= 0)
            throw Error("instance '" + name_ + "': node count must be positive");
        std::unordered_set<std::int64_t> seen;
        seen.reserve(edges_.size() * 2);
        for (const Edge& e : edges_) {
            if (e.u < 0 || e.u >= node_count_ || e.v < 0 || e.v >= node_count_)
                throw Error("instance '" + name_ + "': edge node id out of range");
            if (e.u == e.v)
                throw Error("instance '" + name_ + "': self-loop not allowed");
            const auto [lo, hi] = std::minmax(e.u, e.v);
            const std::int64_t key =
                static_cast<std::int64_t>(lo) * node_count_ + hi;
            if (!seen.insert(key).second)
                throw Error("instance '" + name_ + "': duplicate edge");
            if (e.weight < Weight{})
                throw Error("instance '" + name_ + "': negative edge weight");
        }
        std::sort(terminals_.begin(), terminals_.end());
        terminals_.erase(std::unique(terminals_.begin(), terminals_.end()),
                         terminals_.end());
        if (terminals_.empty())
            throw Error("instance '" + name_ + "': terminal set is empty");
        for (int t : terminals_)
            if (t < 0 || t >= node_count_)
                throw Error("instance '" + name_ + "': terminal id out of range");
    }

    const std::string& name() const { return name_; }
    int node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    /// Terminals as a sorted, duplicate-free list of node ids.
    const std::vector<int>& terminals() const { return terminals_; }

    bool is_terminal(int v) const
    {
        return std::binary_search(terminals_.begin(), terminals_.end(), v);
    }

    Weight total_weight() const
    {
        Weight sum;
        for (const Edge& e : edges_)
            sum += e.weight;
        return sum;
    }

    friend bool operator==(const SteinerInstance& a, const SteinerInstance& b)
    {
        return a.name_ == b.name_ && a.node_count_ == b.node_count_ &&
               a.edges_ == b.edges_ && a.terminals_ == b.terminals_;
    }

private:
    std::string name_;
    int node_count_;
    std::vector<Edge> edges_;
    std::vector<int> terminals_;
};

/// Adjacency list view: per node, (neighbor, edge id) pairs in edge order.
struct AdjacencyList {
    std::vector<std::vector<std::pair<int, int>>> at;

    explicit AdjacencyList(const SteinerInstance& inst)
        : at(static_cast<std::size_t>(inst.node_count()))
    {
        for (int e = 0; e < inst.edge_count(); ++e) {
            const Edge& ed = inst.edge(e);
            at[static_cast<std::size_t>(ed.u)].emplace_back(ed.v, e);
            at[static_cast<std::size_t>(ed.v)].emplace_back(ed.u, e);
        }
    }
};

}  // namespace stprune
