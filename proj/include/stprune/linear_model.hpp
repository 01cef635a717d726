// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "stprune/features.hpp"
#include "stprune/weight.hpp"

namespace stprune::ml {

enum class ModelKind { kLogistic, kLinearSvm };

inline const char* to_string(ModelKind k)
{
    return k == ModelKind::kLogistic ? "logistic" : "linear_svm";
}

struct Hyperparams {
    double l2 = 1e-3;
    double learning_rate = 0.1;
    double lr_decay = 1e-3;
    int max_epochs = 5000;
    double grad_tol = 1e-6;
    bool class_weighted = true;
};

/// Row-major dense dataset with named columns; labels optional.
struct Dataset {
    std::vector<std::string> feature_names;
    int cols = 0;
    std::vector<double> x;
    std::vector<int> labels;  // empty for unlabeled data

    int rows() const
    {
        return cols == 0 ? 0 : static_cast<int>(x.size()) / cols;
    }
    double at(int r, int c) const
    {
        return x[static_cast<std::size_t>(r) * cols + c];
    }
    bool labeled() const { return !labels.empty(); }
};

inline Dataset make_dataset(const std::vector<EdgeFeatureRow>& rows,
                            bool require_labels)
{
    Dataset d;
    d.feature_names.assign(feature_names().begin(), feature_names().end());
    d.cols = kFeatureCount;
    d.x.reserve(rows.size() * kFeatureCount);
    for (const EdgeFeatureRow& row : rows) {
        for (double f : row.features) {
            if (!std::isfinite(f))
                throw Error("dataset: non-finite feature value");
            d.x.push_back(f);
        }
        if (row.label)
            d.labels.push_back(*row.label);
        else if (require_labels)
            throw Error("dataset: row without label");
    }
    if (!d.labels.empty() &&
        d.labels.size() != rows.size())
        throw Error("dataset: mixed labeled and unlabeled rows");
    return d;
}

/** Linear classifier with internal per-column standardization. The raw
 * coefficient of a column is weight/stddev, so predictions are invariant
 * to positive rescaling of the raw inputs.
 */
struct TrainedModel {
    ModelKind kind = ModelKind::kLogistic;
    std::vector<std::string> feature_names;
    std::vector<double> mean;    // training-set column means
    std::vector<double> stddev;  // population stddev per column
    std::vector<char> constant;  // stddev == 0: weight pinned to 0
    std::vector<double> weights; // standardized space
    double bias = 0.0;

    std::uint64_t seed = 0;
    Hyperparams hp;
    int epochs_run = 0;
    bool converged = false;

    int feature_count() const { return static_cast<int>(weights.size()); }

    double margin(std::span<const double> raw) const
    {
        double m = bias;
        for (int c = 0; c < feature_count(); ++c) {
            if (constant[static_cast<std::size_t>(c)])
                continue;
            const double z = (raw[static_cast<std::size_t>(c)] -
                              mean[static_cast<std::size_t>(c)]) /
                             stddev[static_cast<std::size_t>(c)];
            m += weights[static_cast<std::size_t>(c)] * z;
        }
        return m;
    }

    /// Coefficients in raw feature space (weight / stddev; 0 for constant
    /// columns).
    std::vector<double> raw_coefficients() const
    {
        std::vector<double> out(weights.size(), 0.0);
        for (std::size_t c = 0; c < weights.size(); ++c)
            if (!constant[c])
                out[c] = weights[c] / stddev[c];
        return out;
    }
};

inline double sigmoid(double m)
{
    if (m >= 0.0)
        return 1.0 / (1.0 + std::exp(-m));
    const double e = std::exp(m);
    return e / (1.0 + e);
}

namespace detail {

/// Per-class sample weights: N / (2 * N_class), or 1 when disabled.
inline std::pair<double, double> class_weights(const Dataset& data,
                                               bool enabled)
{
    if (!enabled)
        return {1.0, 1.0};
    const int n = data.rows();
    int pos = 0;
    for (int label : data.labels)
        pos += label;
    const int neg = n - pos;
    return {n / (2.0 * neg), n / (2.0 * pos)};  // {weight0, weight1}
}

}  // namespace detail

/** Class-weighted L2-regularized logistic loss and gradient on
 * standardized inputs; the gradient layout is [weights..., bias].
 * Exposed so finite-difference checks can probe the exact training
 * objective.
 */
inline double logistic_loss_grad(const Dataset& data,
                                 const std::vector<std::vector<double>>& z,
                                 std::span<const double> w, double bias,
                                 double l2, double weight0, double weight1,
                                 std::span<double> grad_out)
{
    const int n = data.rows();
    const int cols = data.cols;
    double loss = 0.0;
    double wsum = 0.0;
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    for (int r = 0; r < n; ++r) {
        const int y = data.labels[static_cast<std::size_t>(r)];
        const double cw = y == 1 ? weight1 : weight0;
        wsum += cw;
        double m = bias;
        for (int c = 0; c < cols; ++c)
            m += w[static_cast<std::size_t>(c)] *
                 z[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        // softplus(m) - y*m, computed stably.
        const double softplus =
            m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
        loss += cw * (softplus - y * m);
        const double p = sigmoid(m);
        const double g = cw * (p - y);
        for (int c = 0; c < cols; ++c)
            grad_out[static_cast<std::size_t>(c)] +=
                g * z[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        grad_out[static_cast<std::size_t>(cols)] += g;
    }
    loss /= wsum;
    for (int c = 0; c <= cols; ++c)
        grad_out[static_cast<std::size_t>(c)] /= wsum;
    double reg = 0.0;
    for (int c = 0; c < cols; ++c) {
        reg += w[static_cast<std::size_t>(c)] * w[static_cast<std::size_t>(c)];
        grad_out[static_cast<std::size_t>(c)] +=
            l2 * w[static_cast<std::size_t>(c)];
    }
    return loss + 0.5 * l2 * reg;
}

/// Hinge loss counterpart (subgradient); labels map to {-1, +1}.
inline double hinge_loss_grad(const Dataset& data,
                              const std::vector<std::vector<double>>& z,
                              std::span<const double> w, double bias,
                              double l2, double weight0, double weight1,
                              std::span<double> grad_out)
{
    const int n = data.rows();
    const int cols = data.cols;
    double loss = 0.0;
    double wsum = 0.0;
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    for (int r = 0; r < n; ++r) {
        const int y = data.labels[static_cast<std::size_t>(r)];
        const double s = y == 1 ? 1.0 : -1.0;
        const double cw = y == 1 ? weight1 : weight0;
        wsum += cw;
        double m = bias;
        for (int c = 0; c < cols; ++c)
            m += w[static_cast<std::size_t>(c)] *
                 z[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        const double viol = 1.0 - s * m;
        if (viol > 0.0) {
            loss += cw * viol;
            for (int c = 0; c < cols; ++c)
                grad_out[static_cast<std::size_t>(c)] -=
                    cw * s *
                    z[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            grad_out[static_cast<std::size_t>(cols)] -= cw * s;
        }
    }
    loss /= wsum;
    for (int c = 0; c <= cols; ++c)
        grad_out[static_cast<std::size_t>(c)] /= wsum;
    double reg = 0.0;
    for (int c = 0; c < cols; ++c) {
        reg += w[static_cast<std::size_t>(c)] * w[static_cast<std::size_t>(c)];
        grad_out[static_cast<std::size_t>(c)] +=
            l2 * w[static_cast<std::size_t>(c)];
    }
    return loss + 0.5 * l2 * reg;
}

/** Full-batch (sub)gradient descent from zero weights with a decaying
 * step; deterministic for fixed inputs. Logistic stops when the gradient
 * norm drops below grad_tol; hinge runs to max_epochs unless it hits the
 * same test at a differentiable point.
 */
inline TrainedModel train(const Dataset& data, ModelKind kind,
                          const Hyperparams& hp = {}, std::uint64_t seed = 0)
{
    if (!data.labeled())
        throw Error("train: rows must carry labels");
    const int n = data.rows();
    const int cols = data.cols;
    if (n == 0)
        throw Error("train: empty dataset");
    int pos = 0;
    for (int label : data.labels) {
        if (label != 0 && label != 1)
            throw Error("train: labels must be 0/1");
        pos += label;
    }
    if (pos == 0 || pos == n)
        throw Error("train: need at least one row of each class");

    TrainedModel model;
    model.kind = kind;
    model.feature_names = data.feature_names;
    model.hp = hp;
    model.seed = seed;
    model.mean.assign(static_cast<std::size_t>(cols), 0.0);
    model.stddev.assign(static_cast<std::size_t>(cols), 0.0);
    model.constant.assign(static_cast<std::size_t>(cols), 0);
    model.weights.assign(static_cast<std::size_t>(cols), 0.0);

    for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c)
            model.mean[static_cast<std::size_t>(c)] += data.at(r, c);
    for (int c = 0; c < cols; ++c)
        model.mean[static_cast<std::size_t>(c)] /= n;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c) {
            const double d = data.at(r, c) - model.mean[static_cast<std::size_t>(c)];
            model.stddev[static_cast<std::size_t>(c)] += d * d;
        }
    for (int c = 0; c < cols; ++c) {
        model.stddev[static_cast<std::size_t>(c)] =
            std::sqrt(model.stddev[static_cast<std::size_t>(c)] / n);
        if (model.stddev[static_cast<std::size_t>(c)] == 0.0)
            model.constant[static_cast<std::size_t>(c)] = 1;
    }

    // Standardized design matrix; constant columns become all-zero.
    std::vector<std::vector<double>> z(
        static_cast<std::size_t>(n),
        std::vector<double>(static_cast<std::size_t>(cols), 0.0));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c)
            if (!model.constant[static_cast<std::size_t>(c)])
                z[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    (data.at(r, c) - model.mean[static_cast<std::size_t>(c)]) /
                    model.stddev[static_cast<std::size_t>(c)];

    const auto [weight0, weight1] =
        detail::class_weights(data, hp.class_weighted);
    std::vector<double> grad(static_cast<std::size_t>(cols) + 1, 0.0);
    for (int epoch = 0; epoch < hp.max_epochs; ++epoch) {
        if (kind == ModelKind::kLogistic)
            logistic_loss_grad(data, z, model.weights, model.bias, hp.l2,
                               weight0, weight1, grad);
        else
            hinge_loss_grad(data, z, model.weights, model.bias, hp.l2, weight0,
                            weight1, grad);
        double norm = 0.0;
        for (double g : grad)
            norm += g * g;
        norm = std::sqrt(norm);
        model.epochs_run = epoch;
        if (norm < hp.grad_tol) {
            model.converged = true;
            break;
        }
        const double lr =
            hp.learning_rate / (1.0 + hp.lr_decay * static_cast<double>(epoch));
        for (int c = 0; c < cols; ++c)
            if (!model.constant[static_cast<std::size_t>(c)])
                model.weights[static_cast<std::size_t>(c)] -=
                    lr * grad[static_cast<std::size_t>(c)];
        model.bias -= lr * grad[static_cast<std::size_t>(cols)];
    }
    return model;
}

/// Scores in [0,1]: sigmoid of the margin (a fixed sigmoid calibration for
/// the SVM; thresholds are swept downstream, so only ordering matters).
inline std::vector<double> predict(const TrainedModel& model,
                                   const Dataset& data)
{
    if (data.cols != model.feature_count())
        throw Error("predict: feature count mismatch");
    std::vector<double> scores(static_cast<std::size_t>(data.rows()));
    for (int r = 0; r < data.rows(); ++r) {
        const std::span<const double> raw(
            data.x.data() + static_cast<std::size_t>(r) * data.cols,
            static_cast<std::size_t>(data.cols));
        scores[static_cast<std::size_t>(r)] = sigmoid(model.margin(raw));
    }
    return scores;
}

struct ImportanceEntry {
    std::string name;
    double importance;  // signed: raw coefficient x training stddev
};

/** Importance = raw-space coefficient times the column's population
 * stddev over the given rows. Signed values; rank by magnitude.
 */
inline std::vector<ImportanceEntry> feature_importance(
    const TrainedModel& model, const Dataset& training_rows)
{
    if (training_rows.cols != model.feature_count())
        throw Error("feature_importance: feature count mismatch");
    const int n = training_rows.rows();
    const int cols = training_rows.cols;
    const std::vector<double> coef = model.raw_coefficients();
    std::vector<ImportanceEntry> out;
    out.reserve(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
        double mean = 0.0;
        for (int r = 0; r < n; ++r)
            mean += training_rows.at(r, c);
        mean /= n;
        double var = 0.0;
        for (int r = 0; r < n; ++r) {
            const double d = training_rows.at(r, c) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        out.push_back(ImportanceEntry{
            model.feature_names[static_cast<std::size_t>(c)],
            coef[static_cast<std::size_t>(c)] * sd});
    }
    return out;
}

inline std::vector<ImportanceEntry> rank_by_magnitude(
    std::vector<ImportanceEntry> entries)
{
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) {
                         return std::abs(a.importance) > std::abs(b.importance);
                     });
    return entries;
}

struct SweepPoint {
    double threshold = 0.0;
    double prune_rate = 0.0;
    int pruned = 0;
    int false_prunes = 0;  // label 1 edges below threshold
    int true_prunes = 0;   // label 0 edges below threshold
    int kept = 0;
};

/// For each threshold t: pruned = rows with score < t.
inline std::vector<SweepPoint> sweep_thresholds(
    const TrainedModel& model, const Dataset& labeled,
    const std::vector<double>& thresholds)
{
    if (!labeled.labeled())
        throw Error("sweep_thresholds: rows must carry labels");
    const std::vector<double> scores = predict(model, labeled);
    std::vector<SweepPoint> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        SweepPoint p;
        p.threshold = t;
        for (int r = 0; r < labeled.rows(); ++r) {
            if (scores[static_cast<std::size_t>(r)] < t) {
                ++p.pruned;
                if (labeled.labels[static_cast<std::size_t>(r)] == 1)
                    ++p.false_prunes;
                else
                    ++p.true_prunes;
            } else {
                ++p.kept;
            }
        }
        p.prune_rate = labeled.rows() == 0
                           ? 0.0
                           : static_cast<double>(p.pruned) / labeled.rows();
        out.push_back(p);
    }
    return out;
}

namespace detail {

inline std::string format_exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Versioned plain-text persistence; decimal-exact round trip.
inline void save_model(const TrainedModel& model, std::ostream& out)
{
    out << "stprune-model v1\n";
    out << "kind " << to_string(model.kind) << "\n";
    out << "features " << model.feature_count() << "\n";
    for (int c = 0; c < model.feature_count(); ++c)
        out << "feature " << model.feature_names[static_cast<std::size_t>(c)]
            << " " << detail::format_exact(model.mean[static_cast<std::size_t>(c)])
            << " "
            << detail::format_exact(model.stddev[static_cast<std::size_t>(c)])
            << " "
            << detail::format_exact(model.weights[static_cast<std::size_t>(c)])
            << " "
            << static_cast<int>(model.constant[static_cast<std::size_t>(c)])
            << "\n";
    out << "bias " << detail::format_exact(model.bias) << "\n";
    out << "meta seed " << model.seed << " epochs " << model.epochs_run
        << " l2 " << detail::format_exact(model.hp.l2) << " lr "
        << detail::format_exact(model.hp.learning_rate) << " lr_decay "
        << detail::format_exact(model.hp.lr_decay) << " converged "
        << (model.converged ? 1 : 0) << "\n";
    out << "end\n";
}

inline TrainedModel load_model(std::istream& in)
{
    TrainedModel model;
    std::string line;
    if (!std::getline(in, line) || line != "stprune-model v1")
        throw Error("model file: bad header");
    std::string word;
    {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string kind;
        ls >> word >> kind;
        if (word != "kind")
            throw Error("model file: expected kind");
        if (kind == "logistic")
            model.kind = ModelKind::kLogistic;
        else if (kind == "linear_svm")
            model.kind = ModelKind::kLinearSvm;
        else
            throw Error("model file: unknown kind '" + kind + "'");
    }
    int count = 0;
    {
        std::getline(in, line);
        std::istringstream ls(line);
        ls >> word >> count;
        if (word != "features" || count < 0)
            throw Error("model file: expected feature count");
    }
    for (int c = 0; c < count; ++c) {
        if (!std::getline(in, line))
            throw Error("model file: truncated feature list");
        std::istringstream ls(line);
        std::string name;
        double mean = 0.0, sd = 0.0, weight = 0.0;
        int constant = 0;
        ls >> word >> name >> mean >> sd >> weight >> constant;
        if (word != "feature" || ls.fail())
            throw Error("model file: bad feature line");
        model.feature_names.push_back(name);
        model.mean.push_back(mean);
        model.stddev.push_back(sd);
        model.weights.push_back(weight);
        model.constant.push_back(static_cast<char>(constant));
    }
    {
        std::getline(in, line);
        std::istringstream ls(line);
        ls >> word >> model.bias;
        if (word != "bias" || ls.fail())
            throw Error("model file: expected bias");
    }
    if (std::getline(in, line) && line.rfind("meta ", 0) == 0) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;  // "meta"
        while (ls >> key) {
            if (key == "seed")
                ls >> model.seed;
            else if (key == "epochs")
                ls >> model.epochs_run;
            else if (key == "l2")
                ls >> model.hp.l2;
            else if (key == "lr")
                ls >> model.hp.learning_rate;
            else if (key == "lr_decay")
                ls >> model.hp.lr_decay;
            else if (key == "converged") {
                int v = 0;
                ls >> v;
                model.converged = v != 0;
            } else {
                std::string skip;
                ls >> skip;
            }
        }
    }
    return model;
}

}  // namespace stprune::ml
