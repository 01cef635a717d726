// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "stprune/flow_model.hpp"
#include "stprune/graph.hpp"
#include "stprune/lp.hpp"

namespace stprune {

enum class SolveStatus { kOptimal, kInfeasible, kTimeLimit, kError };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::kOptimal:
        return "optimal";
    case SolveStatus::kInfeasible:
        return "infeasible";
    case SolveStatus::kTimeLimit:
        return "time_limit";
    default:
        return "error";
    }
}

struct SolveResult {
    SolveStatus status = SolveStatus::kError;
    Mode mode = Mode::kIntegral;
    double objective = 0.0;                 // sum c_ij * y_ij at the solution
    std::optional<Weight> exact_objective;  // integral solutions only
    std::vector<double> y_values;           // indexed by arc id
    double wall_time = 0.0;                 // seconds
    double best_bound = 0.0;                // lower bound (time-limited runs)
};

struct SolverOptions {
    double time_limit = 0.0;  // seconds; <= 0 means no limit
    std::function<std::unique_ptr<lp::Backend>()> backend = lp::make_simplex;
};

namespace detail {

/// Shortest-path heuristic tree: repeatedly attach the nearest unreached
/// terminal. Only edges marked usable participate. Returns edge ids, or
/// nullopt if some terminal is unreachable.
inline std::optional<std::vector<int>> sph_tree(const SteinerInstance& inst,
                                                const std::vector<bool>& usable)
{
    const AdjacencyList adj(inst);
    const int n = inst.node_count();
    std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
    std::vector<int> tree_edges;
    in_tree[static_cast<std::size_t>(inst.terminals().front())] = true;
    std::size_t reached = 1;

    while (reached < inst.terminals().size()) {
        constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
        std::vector<std::int64_t> dist(static_cast<std::size_t>(n), kInf);
        std::vector<int> via_edge(static_cast<std::size_t>(n), -1);
        using Item = std::pair<std::int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int v = 0; v < n; ++v)
            if (in_tree[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = 0;
                pq.emplace(0, v);
            }
        while (!pq.empty()) {
            const auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[static_cast<std::size_t>(v)])
                continue;
            for (const auto& [w, e] : adj.at[static_cast<std::size_t>(v)]) {
                if (!usable[static_cast<std::size_t>(e)])
                    continue;
                const std::int64_t nd = d + inst.edge(e).weight.micros();
                if (nd < dist[static_cast<std::size_t>(w)]) {
                    dist[static_cast<std::size_t>(w)] = nd;
                    via_edge[static_cast<std::size_t>(w)] = e;
                    pq.emplace(nd, w);
                }
            }
        }
        int best = -1;
        for (int t : inst.terminals())
            if (!in_tree[static_cast<std::size_t>(t)] &&
                dist[static_cast<std::size_t>(t)] < kInf &&
                (best < 0 || dist[static_cast<std::size_t>(t)] <
                                 dist[static_cast<std::size_t>(best)]))
                best = t;
        if (best < 0)
            return std::nullopt;
        int cur = best;
        while (!in_tree[static_cast<std::size_t>(cur)]) {
            const int e = via_edge[static_cast<std::size_t>(cur)];
            tree_edges.push_back(e);
            in_tree[static_cast<std::size_t>(cur)] = true;
            const Edge& ed = inst.edge(e);
            cur = ed.u == cur ? ed.v : ed.u;
        }
        ++reached;
    }
    std::sort(tree_edges.begin(), tree_edges.end());
    return tree_edges;
}

/// Orient tree edges away from the root; returns per-arc 0/1 y values.
inline std::vector<double> orient_tree(const DirectedInstance& g,
                                       const SteinerInstance& inst,
                                       const std::vector<int>& tree_edges)
{
    std::vector<double> y(static_cast<std::size_t>(g.arc_count()), 0.0);
    std::vector<std::vector<std::pair<int, int>>> adj(
        static_cast<std::size_t>(inst.node_count()));
    for (int e : tree_edges) {
        const Edge& ed = inst.edge(e);
        adj[static_cast<std::size_t>(ed.u)].emplace_back(ed.v, e);
        adj[static_cast<std::size_t>(ed.v)].emplace_back(ed.u, e);
    }
    std::vector<bool> seen(static_cast<std::size_t>(inst.node_count()), false);
    std::vector<int> stack{g.root()};
    seen[static_cast<std::size_t>(g.root())] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, e] : adj[static_cast<std::size_t>(v)]) {
            if (seen[static_cast<std::size_t>(w)])
                continue;
            seen[static_cast<std::size_t>(w)] = true;
            const auto [a_uv, a_vu] = DirectedInstance::arcs_of_edge(e);
            y[static_cast<std::size_t>(g.arc(a_uv).from == v ? a_uv : a_vu)] =
                1.0;
            stack.push_back(w);
        }
    }
    return y;
}

inline Weight tree_weight(const SteinerInstance& inst,
                          const std::vector<int>& edges)
{
    Weight sum;
    for (int e : edges)
        sum += inst.edge(e).weight;
    return sum;
}

}  // namespace detail

/** Solve the model: plain LP for relaxed mode, branch-and-bound over a
 * fresh backend per node for integral mode. Deterministic: Dantzig/Bland
 * pivoting, most-fractional branching with fixed tie-breaks.
 */
inline SolveResult solve(const FlowModel& model, const SteinerInstance& inst,
                         const SolverOptions& opts = {})
{
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto deadline =
        opts.time_limit > 0.0
            ? std::optional<Clock::time_point>(
                  start + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(opts.time_limit)))
            : std::nullopt;
    auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - start).count();
    };

    const DirectedInstance& g = model.graph();
    const int arcs = g.arc_count();

    auto make_backend = [&] {
        auto backend = opts.backend();
        model.load_into(*backend);
        backend->set_deadline(deadline);
        return backend;
    };

    SolveResult result;
    result.mode = model.mode();

    if (model.mode() == Mode::kRelaxed) {
        auto backend = make_backend();
        const lp::Status st = backend->optimize();
        result.wall_time = elapsed();
        switch (st) {
        case lp::Status::kOptimal: {
            result.status = SolveStatus::kOptimal;
            result.objective = backend->objective_value();
            result.best_bound = result.objective;
            result.y_values.resize(static_cast<std::size_t>(arcs));
            for (int a = 0; a < arcs; ++a)
                result.y_values[static_cast<std::size_t>(a)] =
                    std::clamp(backend->value(a), 0.0, 1.0);
            break;
        }
        case lp::Status::kInfeasible:
            result.status = SolveStatus::kInfeasible;
            break;
        case lp::Status::kIterLimit:
            result.status = deadline ? SolveStatus::kTimeLimit
                                     : SolveStatus::kError;
            break;
        default:
            result.status = SolveStatus::kError;
        }
        return result;
    }

    // Branch and bound on the binary arc variables.
    auto backend = make_backend();

    // Heuristic incumbent. Edges with a hard-pruned arc are unusable; a
    // soft budget can invalidate the heuristic tree, in which case we
    // start without an incumbent.
    std::vector<bool> usable(static_cast<std::size_t>(inst.edge_count()), true);
    for (int a : model.hard_pruned_arcs())
        usable[static_cast<std::size_t>(g.edge_of_arc(a))] = false;
    std::optional<std::vector<int>> incumbent_edges;
    std::optional<Weight> incumbent_weight;
    if (auto sph = detail::sph_tree(inst, usable)) {
        bool ok = true;
        if (model.soft_prune()) {
            // Conservative budget estimate: a tree edge consumes budget if
            // any of its arcs is constrained. Over-counting only discards
            // the heuristic, never admits an infeasible incumbent.
            std::vector<bool> constrained(
                static_cast<std::size_t>(inst.edge_count()), false);
            for (int a : model.soft_prune()->arcs)
                constrained[static_cast<std::size_t>(g.edge_of_arc(a))] = true;
            int used = 0;
            for (int e : *sph)
                if (constrained[static_cast<std::size_t>(e)])
                    ++used;
            ok = used <= model.soft_prune()->budget;
        }
        if (ok) {
            incumbent_edges = std::move(*sph);
            incumbent_weight = detail::tree_weight(inst, *incumbent_edges);
        }
    }

    struct Node {
        std::vector<std::pair<int, int>> fixes;  // (arc, 0/1)
        double parent_bound;
    };
    std::vector<Node> stack;
    stack.push_back(Node{{}, 0.0});
    double open_bound_min = lp::kInf;
    bool hit_limit = false;

    const double prune_slack = 1e-7;

    while (!stack.empty()) {
        if (deadline && Clock::now() > *deadline) {
            hit_limit = true;
            for (const Node& nd : stack)
                open_bound_min = std::min(open_bound_min, nd.parent_bound);
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();

        // Reset y bounds, then apply this node's fixes.
        for (int a = 0; a < arcs; ++a)
            backend->set_bounds(a, model.variable_lb(a), model.variable_ub(a));
        for (const auto& [a, v] : node.fixes)
            backend->set_bounds(a, v, v);

        const lp::Status st = backend->optimize();
        if (st == lp::Status::kInfeasible)
            continue;
        if (st != lp::Status::kOptimal) {
            if (deadline) {
                hit_limit = true;
                open_bound_min = std::min(open_bound_min, node.parent_bound);
                break;
            }
            result.status = SolveStatus::kError;
            result.wall_time = elapsed();
            return result;
        }
        const double bound = backend->objective_value();
        if (incumbent_weight &&
            bound >= incumbent_weight->value() - prune_slack)
            continue;

        // Most fractional arc.
        int branch_arc = -1;
        double best_frac = 1e-6;
        for (int a = 0; a < arcs; ++a) {
            const double v = backend->value(a);
            const double frac = std::min(v, 1.0 - v);
            if (frac > best_frac) {
                best_frac = frac;
                branch_arc = a;
            }
        }
        if (branch_arc < 0) {
            // Integral point: flows certify feasibility of the rounded tree.
            std::vector<int> edges;
            for (int e = 0; e < inst.edge_count(); ++e) {
                const auto [a1, a2] = DirectedInstance::arcs_of_edge(e);
                if (backend->value(a1) > 0.5 || backend->value(a2) > 0.5)
                    edges.push_back(e);
            }
            const Weight w = detail::tree_weight(inst, edges);
            if (!incumbent_weight || w < *incumbent_weight) {
                incumbent_weight = w;
                incumbent_edges = std::move(edges);
            }
            continue;
        }

        Node down{node.fixes, bound};
        down.fixes.emplace_back(branch_arc, 0);
        Node up{std::move(node.fixes), bound};
        up.fixes.emplace_back(branch_arc, 1);
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));  // explored first
    }

    result.wall_time = elapsed();
    if (!incumbent_edges) {
        result.status = hit_limit ? SolveStatus::kTimeLimit
                                  : SolveStatus::kInfeasible;
        result.best_bound =
            hit_limit && open_bound_min != lp::kInf ? open_bound_min : 0.0;
        return result;
    }

    result.status = hit_limit ? SolveStatus::kTimeLimit : SolveStatus::kOptimal;
    result.exact_objective = *incumbent_weight;
    result.objective = incumbent_weight->value();
    result.y_values = detail::orient_tree(g, inst, *incumbent_edges);
    // Proved optimum when the open set is exhausted; else the weakest open
    // parent bound, capped by the incumbent.
    result.best_bound =
        hit_limit ? std::min(open_bound_min == lp::kInf ? result.objective
                                                        : open_bound_min,
                             result.objective)
                  : result.objective;
    return result;
}

/** Undirected edges whose either arc is selected (y >= 0.5), validated to
 * be an acyclic terminal-spanning subgraph whose weight equals the
 * reported objective.
 */
inline std::vector<int> extract_tree(const SteinerInstance& inst,
                                     const SolveResult& r)
{
    if (r.mode != Mode::kIntegral || r.status != SolveStatus::kOptimal)
        throw Error("extract_tree requires an integral-optimal result");
    std::vector<int> edges;
    for (int e = 0; e < inst.edge_count(); ++e) {
        const auto [a1, a2] = DirectedInstance::arcs_of_edge(e);
        if (r.y_values[static_cast<std::size_t>(a1)] >= 0.5 ||
            r.y_values[static_cast<std::size_t>(a2)] >= 0.5)
            edges.push_back(e);
    }
    detail::UnionFind uf(inst.node_count());
    for (int e : edges)
        if (!uf.unite(inst.edge(e).u, inst.edge(e).v))
            throw Error("solution fails tree validation: cycle");
    if (!terminals_connected(inst, edges))
        throw Error("solution fails tree validation: terminals disconnected");
    if (r.exact_objective &&
        detail::tree_weight(inst, edges) != *r.exact_objective)
        throw Error("solution fails tree validation: weight mismatch");
    return edges;
}

/** Convenience wrapper: directed conversion at the given root (default:
 * lowest-numbered terminal), build, solve. Single-terminal instances
 * short-circuit to an empty tree of weight zero.
 */
inline SolveResult solve_instance(const SteinerInstance& inst, Mode mode,
                                  const SolverOptions& opts = {},
                                  std::optional<int> root = std::nullopt)
{
    if (inst.terminals().size() == 1) {
        SolveResult r;
        r.status = SolveStatus::kOptimal;
        r.mode = mode;
        r.objective = 0.0;
        r.exact_objective = Weight{};
        r.y_values.assign(static_cast<std::size_t>(inst.edge_count()) * 2, 0.0);
        r.best_bound = 0.0;
        return r;
    }
    const DirectedInstance d =
        to_directed(inst, root.value_or(inst.terminals().front()));
    const FlowModel model = build_model(d, mode);
    return solve(model, inst, opts);
}

}  // namespace stprune
