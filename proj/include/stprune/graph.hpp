// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "stprune/instance.hpp"

namespace stprune {

/// Directed arc; arcs 2e and 2e+1 are the two orientations of edge e.
struct Arc {
    int from = 0;
    int to = 0;
    Weight weight;
    int edge_id = 0;
};

/** Arc-doubled view of a SteinerInstance with a designated root terminal.
 *
 * The remaining terminals, in ascending node order, index the flow
 * commodities of the multicommodity formulation.
 */
class DirectedInstance {
public:
    DirectedInstance(const SteinerInstance& inst, int root)
        : node_count_(inst.node_count()), root_(root)
    {
        if (!inst.is_terminal(root))
            throw Error("root " + std::to_string(root + 1) +
                        " is not a terminal");
        arcs_.reserve(inst.edges().size() * 2);
        for (int e = 0; e < inst.edge_count(); ++e) {
            const Edge& ed = inst.edge(e);
            arcs_.push_back(Arc{ed.u, ed.v, ed.weight, e});
            arcs_.push_back(Arc{ed.v, ed.u, ed.weight, e});
        }
        for (int t : inst.terminals())
            if (t != root)
                commodities_.push_back(t);
    }

    int node_count() const { return node_count_; }
    int root() const { return root_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }
    const Arc& arc(int a) const { return arcs_[static_cast<std::size_t>(a)]; }

    /// Terminals excluding the root, ascending; position = commodity index.
    const std::vector<int>& commodities() const { return commodities_; }
    int commodity_count() const { return static_cast<int>(commodities_.size()); }

    /// Undirected edge the arc came from.
    int edge_of_arc(int a) const { return a / 2; }

    /// The two arc ids of an undirected edge.
    static std::pair<int, int> arcs_of_edge(int e) { return {2 * e, 2 * e + 1}; }

private:
    int node_count_;
    int root_;
    std::vector<Arc> arcs_;
    std::vector<int> commodities_;
};

inline DirectedInstance to_directed(const SteinerInstance& inst, int root)
{
    return DirectedInstance(inst, root);
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n))
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x)
    {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(
                    parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }

    /// Returns false if already in the same set.
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent_[static_cast<std::size_t>(a)] = b;
        return true;
    }

private:
    std::vector<int> parent_;
};

}  // namespace detail

/// True iff all terminals lie in one component of the subgraph induced by
/// the given edge ids.
inline bool terminals_connected(const SteinerInstance& inst,
                                std::span<const int> active_edges)
{
    detail::UnionFind uf(inst.node_count());
    for (int e : active_edges) {
        const Edge& ed = inst.edge(e);
        uf.unite(ed.u, ed.v);
    }
    const int rep = uf.find(inst.terminals().front());
    for (int t : inst.terminals())
        if (uf.find(t) != rep)
            return false;
    return true;
}

/// True iff the whole graph is connected.
inline bool graph_connected(const SteinerInstance& inst)
{
    detail::UnionFind uf(inst.node_count());
    int components = inst.node_count();
    for (const Edge& e : inst.edges())
        if (uf.unite(e.u, e.v))
            --components;
    return components == 1;
}

}  // namespace stprune
