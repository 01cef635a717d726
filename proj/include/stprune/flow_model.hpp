// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "stprune/graph.hpp"
#include "stprune/lp.hpp"

namespace stprune {

enum class Mode { kIntegral, kRelaxed };

/** The multicommodity-flow model for a DirectedInstance.
 *
 * Variables: one y per arc (arc selection) followed by one x per
 * (commodity, arc) pair (flow of that commodity on that arc). Rows:
 * per-commodity node balance (+1 at the root, -1 at the commodity
 * terminal, 0 elsewhere), then x <= y coupling for every (commodity, arc),
 * plus at most one soft-prune budget row. Flow nonnegativity and the y
 * range live in the variable bounds.
 */
class FlowModel {
public:
    FlowModel(DirectedInstance graph, Mode mode)
        : graph_(std::move(graph)), mode_(mode)
    {
        if (graph_.commodity_count() == 0)
            throw Error(
                "flow model needs at least one commodity "
                "(single-terminal instances are solved upstream)");
        const int arcs = graph_.arc_count();
        const int coms = graph_.commodity_count();
        var_lb_.assign(static_cast<std::size_t>(variable_count()), 0.0);
        var_ub_.assign(static_cast<std::size_t>(variable_count()), lp::kInf);
        objective_.assign(static_cast<std::size_t>(variable_count()), 0.0);
        for (int a = 0; a < arcs; ++a) {
            var_ub_[static_cast<std::size_t>(a)] = 1.0;
            objective_[static_cast<std::size_t>(a)] =
                graph_.arc(a).weight.value();
        }

        // Node balance per commodity: out-flow minus in-flow.
        for (int k = 0; k < coms; ++k) {
            const int target = graph_.commodities()[static_cast<std::size_t>(k)];
            for (int node = 0; node < graph_.node_count(); ++node) {
                lp::Row row;
                row.sense = lp::Sense::kEq;
                row.rhs = node == graph_.root() ? 1.0
                        : node == target        ? -1.0
                                                : 0.0;
                for (int a = 0; a < arcs; ++a) {
                    if (graph_.arc(a).from == node)
                        row.terms.push_back(lp::Term{x_index(k, a), 1.0});
                    else if (graph_.arc(a).to == node)
                        row.terms.push_back(lp::Term{x_index(k, a), -1.0});
                }
                balance_rows_.push_back(std::move(row));
            }
        }
        for (int k = 0; k < coms; ++k)
            for (int a = 0; a < arcs; ++a) {
                lp::Row row;
                row.sense = lp::Sense::kLe;
                row.rhs = 0.0;
                row.terms = {lp::Term{x_index(k, a), 1.0},
                             lp::Term{y_index(a), -1.0}};
                coupling_rows_.push_back(std::move(row));
            }
    }

    const DirectedInstance& graph() const { return graph_; }
    Mode mode() const { return mode_; }

    int y_count() const { return graph_.arc_count(); }
    int x_count() const { return graph_.arc_count() * graph_.commodity_count(); }
    int variable_count() const { return y_count() + x_count(); }

    int y_index(int arc) const { return arc; }
    int x_index(int commodity, int arc) const
    {
        return y_count() + commodity * graph_.arc_count() + arc;
    }

    const std::vector<lp::Row>& balance_rows() const { return balance_rows_; }
    const std::vector<lp::Row>& coupling_rows() const { return coupling_rows_; }
    const std::vector<double>& objective() const { return objective_; }
    double variable_lb(int v) const { return var_lb_[static_cast<std::size_t>(v)]; }
    double variable_ub(int v) const { return var_ub_[static_cast<std::size_t>(v)]; }

    const std::vector<int>& hard_pruned_arcs() const { return hard_pruned_; }

    struct SoftPrune {
        std::vector<int> arcs;
        int budget = 0;
    };
    const std::optional<SoftPrune>& soft_prune() const { return soft_; }

    /// Fix y to 0 for each given arc; everything else unchanged.
    void fix_arcs_to_zero(std::span<const int> arcs)
    {
        for (int a : arcs) {
            var_ub_[static_cast<std::size_t>(y_index(a))] = 0.0;
            hard_pruned_.push_back(a);
        }
    }

    /// Add the budget row: sum of y over the given arcs <= budget.
    void add_soft_budget(std::vector<int> arcs, int budget)
    {
        soft_ = SoftPrune{std::move(arcs), budget};
    }

    /// Materialize the model into an LP backend. Returns nothing; variable
    /// indices in the backend equal the model's indices.
    void load_into(lp::Backend& backend) const
    {
        for (int v = 0; v < variable_count(); ++v)
            backend.add_variable(var_lb_[static_cast<std::size_t>(v)],
                                 var_ub_[static_cast<std::size_t>(v)],
                                 objective_[static_cast<std::size_t>(v)]);
        for (const lp::Row& r : balance_rows_)
            backend.add_row(r.terms, r.sense, r.rhs);
        for (const lp::Row& r : coupling_rows_)
            backend.add_row(r.terms, r.sense, r.rhs);
        if (soft_) {
            std::vector<lp::Term> terms;
            terms.reserve(soft_->arcs.size());
            for (int a : soft_->arcs)
                terms.push_back(lp::Term{y_index(a), 1.0});
            backend.add_row(std::move(terms), lp::Sense::kLe,
                            static_cast<double>(soft_->budget));
        }
    }

private:
    DirectedInstance graph_;
    Mode mode_;
    std::vector<double> var_lb_, var_ub_, objective_;
    std::vector<lp::Row> balance_rows_, coupling_rows_;
    std::vector<int> hard_pruned_;
    std::optional<SoftPrune> soft_;
};

inline FlowModel build_model(const DirectedInstance& d, Mode mode)
{
    return FlowModel(d, mode);
}

/// Copy of the model with y fixed to 0 for every pruned arc.
inline FlowModel apply_hard_prune(FlowModel model, std::span<const int> arcs)
{
    model.fix_arcs_to_zero(arcs);
    return model;
}

/// Copy of the model with one extra row: sum of pruned-arc y's <= budget.
inline FlowModel apply_soft_prune(FlowModel model, std::vector<int> arcs,
                                  int budget)
{
    if (budget < 0)
        throw Error("soft-prune budget must be nonnegative");
    model.add_soft_budget(std::move(arcs), budget);
    return model;
}

/// CPLEX LP text export, for cross-checking against external solvers.
inline void write_lp_format(const FlowModel& model, std::ostream& out)
{
    const DirectedInstance& g = model.graph();
    auto y_name = [&](int a) {
        return "y_" + std::to_string(g.arc(a).from + 1) + "_" +
               std::to_string(g.arc(a).to + 1);
    };
    auto x_name = [&](int k, int a) {
        return "x" + std::to_string(k + 1) + "_" +
               std::to_string(g.arc(a).from + 1) + "_" +
               std::to_string(g.arc(a).to + 1);
    };
    auto var_name = [&](int v) {
        if (v < model.y_count())
            return y_name(v);
        const int k = (v - model.y_count()) / g.arc_count();
        const int a = (v - model.y_count()) % g.arc_count();
        return x_name(k, a);
    };

    out << "\\ multicommodity flow Steiner tree model\n";
    out << "Minimize\n obj:";
    for (int a = 0; a < model.y_count(); ++a)
        out << " + " << g.arc(a).weight.str() << " " << y_name(a);
    out << "\nSubject To\n";
    int rid = 0;
    auto write_row = [&](const lp::Row& row, const std::string& prefix) {
        out << " " << prefix << rid++ << ":";
        for (const lp::Term& t : row.terms)
            out << (t.coef >= 0 ? " + " : " - ")
                << (std::abs(t.coef) == 1.0 ? std::string()
                                            : std::to_string(std::abs(t.coef)) +
                                                  " ")
                << var_name(t.var);
        switch (row.sense) {
        case lp::Sense::kLe:
            out << " <= ";
            break;
        case lp::Sense::kEq:
            out << " = ";
            break;
        case lp::Sense::kGe:
            out << " >= ";
            break;
        }
        out << row.rhs << "\n";
    };
    for (const lp::Row& r : model.balance_rows())
        write_row(r, "bal");
    rid = 0;
    for (const lp::Row& r : model.coupling_rows())
        write_row(r, "cap");
    if (model.soft_prune()) {
        out << " soft0:";
        for (int a : model.soft_prune()->arcs)
            out << " + " << y_name(a);
        out << " <= " << model.soft_prune()->budget << "\n";
    }
    out << "Bounds\n";
    for (int v = 0; v < model.variable_count(); ++v) {
        const double lb = model.variable_lb(v);
        const double ub = model.variable_ub(v);
        if (ub == lp::kInf)
            out << " " << var_name(v) << " >= " << lb << "\n";
        else
            out << " " << lb << " <= " << var_name(v) << " <= " << ub << "\n";
    }
    if (model.mode() == Mode::kIntegral) {
        out << "Binary\n";
        for (int a = 0; a < model.y_count(); ++a)
            out << " " << y_name(a) << "\n";
    }
    out << "End\n";
}

}  // namespace stprune
