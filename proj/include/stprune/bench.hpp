// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stprune/linear_model.hpp"
#include "stprune/pipeline.hpp"
#include "stprune/stp_io.hpp"

namespace stprune::bench {

struct ExperimentConfig {
    std::filesystem::path dataset_dir;
    std::filesystem::path out_dir;
    std::filesystem::path manifest_path;  // default: dataset_dir/manifest.json
    ml::ModelKind classifier = ml::ModelKind::kLogistic;
    ml::Hyperparams hp;
    std::vector<double> thresholds{0.0, 0.2, 0.4, 0.6, 0.8, 1.01};
    std::vector<int> soft_budgets;  // applied per threshold when nonempty
    double time_limit = 60.0;       // seconds per solve
    std::uint64_t seed = 1;
    int jobs = 1;
    double split_ratio = 0.8;
    bool remeasure = false;

    void validate() const
    {
        if (time_limit <= 0.0)
            throw Error("config: time limit must be positive");
        if (split_ratio <= 0.0 || split_ratio >= 1.0)
            throw Error("config: split ratio must lie in (0,1)");
        if (thresholds.empty())
            throw Error("config: threshold grid is empty");
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (thresholds[i] < 0.0 || thresholds[i] > 1.0 + 0.011)
                throw Error("config: thresholds must lie in [0, 1+eps]");
            if (i > 0 && thresholds[i] <= thresholds[i - 1])
                throw Error("config: thresholds must be strictly ascending");
        }
        for (int b : soft_budgets)
            if (b < 0)
                throw Error("config: soft budgets must be nonnegative");
        if (jobs < 1)
            throw Error("config: jobs must be >= 1");
    }
};

/** Sort by measured original runtime ascending (ties by name), put the
 * first ceil(ratio*n) in the training split and the slow rest in test.
 */
inline std::pair<std::vector<std::string>, std::vector<std::string>>
split_dataset(std::vector<std::pair<std::string, double>> runtimes,
              double ratio = 0.8)
{
    std::sort(runtimes.begin(), runtimes.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second)
                      return a.second < b.second;
                  return a.first < b.first;
              });
    const std::size_t n = runtimes.size();
    const auto train_count = static_cast<std::size_t>(
        std::ceil(ratio * static_cast<double>(n)));
    std::vector<std::string> train, test;
    for (std::size_t i = 0; i < n; ++i)
        (i < train_count ? train : test).push_back(runtimes[i].first);
    return {train, test};
}

/** JSON-backed cache of measured runs. Original solves are keyed by
 * instance name; pruned runs by a config-qualified key. Reusing cached
 * reports keeps splits stable across runs and makes reruns byte-identical.
 */
class Manifest {
public:
    struct Original {
        double objective = 0.0;
        double solve_time = 0.0;
        double feature_time = 0.0;
        std::string status;
        std::vector<int> tree;
    };

    explicit Manifest(std::filesystem::path path) : path_(std::move(path))
    {
        std::ifstream in(path_);
        if (!in)
            return;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            return;
        }
        if (j.value("version", 0) != 1)
            return;
        const nlohmann::json originals =
            j.value("originals", nlohmann::json::object());
        for (const auto& [name, entry] : originals.items()) {
            Original o;
            o.objective = entry.at("objective").get<double>();
            o.solve_time = entry.at("solve_time").get<double>();
            o.feature_time = entry.value("feature_time", 0.0);
            o.status = entry.at("status").get<std::string>();
            o.tree = entry.value("tree", std::vector<int>{});
            originals_[name] = std::move(o);
        }
        const nlohmann::json runs = j.value("runs", nlohmann::json::object());
        for (const auto& [key, entry] : runs.items())
            runs_[key] = report_from_json(entry);
    }

    void save() const
    {
        if (path_.empty())
            return;
        nlohmann::json j;
        j["version"] = 1;
        nlohmann::json originals = nlohmann::json::object();
        for (const auto& [name, o] : originals_) {
            nlohmann::json entry;
            entry["objective"] = o.objective;
            entry["solve_time"] = o.solve_time;
            entry["feature_time"] = o.feature_time;
            entry["status"] = o.status;
            entry["tree"] = o.tree;
            originals[name] = std::move(entry);
        }
        j["originals"] = std::move(originals);
        nlohmann::json runs = nlohmann::json::object();
        for (const auto& [key, report] : runs_)
            runs[key] = report_to_json(report);
        j["runs"] = std::move(runs);
        if (!path_.parent_path().empty())
            std::filesystem::create_directories(path_.parent_path());
        std::ofstream out(path_);
        out << j.dump(1) << "\n";
    }

    std::optional<Original> get_original(const std::string& name) const
    {
        const std::lock_guard<std::mutex> lock(mutex_);
        const auto it = originals_.find(name);
        if (it == originals_.end())
            return std::nullopt;
        return it->second;
    }
    void put_original(const std::string& name, Original o)
    {
        const std::lock_guard<std::mutex> lock(mutex_);
        originals_[name] = std::move(o);
    }
    std::optional<SolveReport> get_run(const std::string& key) const
    {
        const std::lock_guard<std::mutex> lock(mutex_);
        const auto it = runs_.find(key);
        if (it == runs_.end())
            return std::nullopt;
        return it->second;
    }
    void put_run(const std::string& key, SolveReport report)
    {
        const std::lock_guard<std::mutex> lock(mutex_);
        runs_[key] = std::move(report);
    }
    void clear()
    {
        originals_.clear();
        runs_.clear();
    }

private:
    std::filesystem::path path_;
    std::map<std::string, Original> originals_;
    std::map<std::string, SolveReport> runs_;
    mutable std::mutex mutex_;
};

/// One evaluated (instance, threshold[, budget]) cell.
struct EvalRun {
    double threshold = 0.0;
    int soft_budget = -1;  // -1 = hard prune
    SolveReport report;
};

struct BenchResult {
    std::vector<SolveReport> originals;
    std::vector<EvalRun> runs;
    std::vector<std::string> train_names;
    std::vector<std::string> test_names;
    std::optional<ml::TrainedModel> model;
    std::vector<std::pair<std::string, std::string>> errors;
    int exit_code = 0;
};

namespace detail {

inline void parallel_for(int count, int jobs,
                         const std::function<void(int)>& body)
{
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                body(i);
        });
    for (auto& th : pool)
        th.join();
}

struct PreparedInstance {
    SteinerInstance inst;
    InstanceFeatures features;
    SolveReport original;
    std::vector<int> optimal_tree;
};

inline std::string g9(double v) { return stprune::detail::format_g9(v); }

}  // namespace detail

/** Run the full experiment: measure (or reuse cached) original solves,
 * split by runtime, train on the fast split, evaluate thresholds and soft
 * budgets on the held-out slow split, and write reports.json, summary.csv,
 * per-instance trade-off and feature CSVs, and model.txt under out_dir.
 *
 * Per-instance failures are recorded and the run continues; exit_code is
 * nonzero if anything failed.
 */
inline BenchResult run_benchmark(const ExperimentConfig& config_in)
{
    namespace fs = std::filesystem;
    ExperimentConfig config = config_in;
    config.validate();
    if (config.manifest_path.empty())
        config.manifest_path = config.dataset_dir / "manifest.json";
    fs::create_directories(config.out_dir);

    BenchResult result;

    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(config.dataset_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".stp")
            files.emplace_back(entry.path().stem().string(), entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error("no .stp files in " + config.dataset_dir.string());

    Manifest manifest(config.manifest_path);
    if (config.remeasure)
        manifest.clear();

    SolverOptions solver_opts;
    solver_opts.time_limit = config.time_limit;

    // Phase 1: per-instance features and original solve (cache-aware).
    std::vector<std::optional<detail::PreparedInstance>> prepared(files.size());
    std::mutex error_mutex;
    detail::parallel_for(
        static_cast<int>(files.size()), config.jobs, [&](int i) {
            const auto& [name, path] = files[static_cast<std::size_t>(i)];
            try {
                std::ifstream in(path);
                std::stringstream buffer;
                buffer << in.rdbuf();
                SteinerInstance inst = parse_instance(buffer.str(), name);
                InstanceFeatures features =
                    compute_instance_features(inst, solver_opts);

                SolveReport original;
                std::vector<int> tree;
                if (const auto cached = manifest.get_original(name)) {
                    original.instance = name;
                    original.mode = "original";
                    original.objective = cached->objective;
                    original.solve_time = cached->solve_time;
                    original.status = cached->status;
                    original.tree_edges = cached->tree;
                    features.feature_time = cached->feature_time;
                    tree = cached->tree;
                } else {
                    const SolveResult r =
                        solve_instance(inst, Mode::kIntegral, solver_opts);
                    original =
                        stprune::detail::report_from_result(inst, "original", r,
                                                           0.0);
                    tree = original.tree_edges;
                    Manifest::Original entry;
                    entry.objective = original.objective;
                    entry.solve_time = original.solve_time;
                    entry.feature_time = features.feature_time;
                    entry.status = original.status;
                    entry.tree = tree;
                    manifest.put_original(name, std::move(entry));
                }
                if (original.status != "optimal")
                    throw Error("original solve not optimal (status " +
                                original.status + ")");
                prepared[static_cast<std::size_t>(i)] =
                    detail::PreparedInstance{std::move(inst),
                                             std::move(features),
                                             std::move(original),
                                             std::move(tree)};
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                result.errors.emplace_back(name, e.what());
            }
        });

    std::vector<detail::PreparedInstance> instances;
    for (auto& p : prepared)
        if (p)
            instances.push_back(std::move(*p));
    if (instances.empty()) {
        manifest.save();
        result.exit_code = 1;
        return result;
    }

    // Phase 2: runtime split.
    std::vector<std::pair<std::string, double>> runtimes;
    for (const auto& p : instances)
        runtimes.emplace_back(p.inst.name(), p.original.solve_time);
    std::tie(result.train_names, result.test_names) =
        split_dataset(runtimes, config.split_ratio);

    auto in_split = [](const std::vector<std::string>& names,
                       const std::string& name) {
        return std::find(names.begin(), names.end(), name) != names.end();
    };

    // Phase 3: train on the fast split.
    std::vector<EdgeFeatureRow> train_rows;
    for (const auto& p : instances) {
        if (!in_split(result.train_names, p.inst.name()))
            continue;
        const auto labeled =
            assemble_rows(p.inst, p.features.lp_values, weight_features(p.inst),
                          local_rank(p.inst), p.features.centralities,
                          p.optimal_tree);
        train_rows.insert(train_rows.end(), labeled.begin(), labeled.end());
    }
    const ml::Dataset train_data = ml::make_dataset(train_rows, true);
    result.model =
        ml::train(train_data, config.classifier, config.hp, config.seed);

    {
        std::ofstream model_out(config.out_dir / "model.txt");
        ml::save_model(*result.model, model_out);
    }
    for (const auto& p : instances) {
        std::ofstream csv(config.out_dir /
                          ("features_" + p.inst.name() + ".csv"));
        const auto labeled =
            assemble_rows(p.inst, p.features.lp_values, weight_features(p.inst),
                          local_rank(p.inst), p.features.centralities,
                          p.optimal_tree);
        write_feature_csv(csv, labeled);
    }

    // Phase 4: evaluate the held-out split across the threshold grid.
    const std::string run_tag =
        std::string(ml::to_string(config.classifier)) +
        "|seed=" + std::to_string(config.seed) +
        "|ratio=" + detail::g9(config.split_ratio) +
        "|l2=" + detail::g9(config.hp.l2) +
        "|lr=" + detail::g9(config.hp.learning_rate) +
        "|ep=" + std::to_string(config.hp.max_epochs);
    std::vector<const detail::PreparedInstance*> test_instances;
    for (const auto& p : instances)
        if (in_split(result.test_names, p.inst.name()))
            test_instances.push_back(&p);

    std::mutex runs_mutex;
    detail::parallel_for(
        static_cast<int>(test_instances.size()), config.jobs, [&](int idx) {
            const detail::PreparedInstance& p =
                *test_instances[static_cast<std::size_t>(idx)];
            try {
                const ml::Dataset rows =
                    ml::make_dataset(p.features.rows, false);
                const std::vector<double> scores =
                    predict(*result.model, rows);
                std::vector<EvalRun> local;
                for (double threshold : config.thresholds) {
                    const PruneMask mask =
                        make_mask(scores, threshold, p.features.lp_values);
                    const std::string key = p.inst.name() + "|hard|t=" +
                                            detail::g9(threshold) + "|" +
                                            run_tag;
                    SolveReport report;
                    if (const auto cached = manifest.get_run(key)) {
                        report = *cached;
                    } else {
                        report = solve_hard(p.inst, mask, config.time_limit);
                        report.feature_time = p.features.feature_time;
                        evaluate(report, p.original);
                        manifest.put_run(key, report);
                    }
                    local.push_back(EvalRun{threshold, -1, report});
                    for (int budget : config.soft_budgets) {
                        const std::string soft_key =
                            p.inst.name() + "|soft" + std::to_string(budget) +
                            "|t=" + detail::g9(threshold) + "|" + run_tag;
                        SolveReport soft;
                        if (const auto cached =
                                manifest.get_run(soft_key)) {
                            soft = *cached;
                        } else {
                            soft = solve_soft(p.inst, mask, budget,
                                              config.time_limit);
                            soft.feature_time = p.features.feature_time;
                            evaluate(soft, p.original);
                            manifest.put_run(soft_key, soft);
                        }
                        local.push_back(EvalRun{threshold, budget, soft});
                    }
                }
                const std::lock_guard<std::mutex> lock(runs_mutex);
                for (auto& r : local)
                    result.runs.push_back(std::move(r));
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                result.errors.emplace_back(p.inst.name(), e.what());
            }
        });

    manifest.save();

    std::sort(result.runs.begin(), result.runs.end(),
              [](const EvalRun& a, const EvalRun& b) {
                  return std::tie(a.report.instance, a.threshold,
                                  a.soft_budget) <
                         std::tie(b.report.instance, b.threshold,
                                  b.soft_budget);
              });
    for (const auto& p : instances)
        result.originals.push_back(p.original);

    // reports.json: originals first, then evaluation runs.
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const SolveReport& r : result.originals)
            arr.push_back(report_to_json(r));
        for (const EvalRun& run : result.runs)
            arr.push_back(report_to_json(run.report));
        std::ofstream out(config.out_dir / "reports.json");
        out << arr.dump(1) << "\n";
    }

    // summary.csv: hard runs, Table-2 style columns.
    {
        std::ofstream out(config.out_dir / "summary.csv");
        out << "instance,threshold,prune_rate,objective_original,"
               "objective_pruned,objective_increase_pct,runtime_original,"
               "feature_runtime,solver_runtime,runtime_decrease_pct,status\n";
        for (const EvalRun& run : result.runs) {
            if (run.soft_budget >= 0)
                continue;
            const SolveReport& r = run.report;
            out << r.instance << "," << detail::g9(run.threshold) << ","
                << detail::g9(r.prune_rate) << ","
                << detail::g9(r.optimal_objective.value_or(0.0)) << ","
                << detail::g9(r.objective) << ","
                << detail::g9(r.objective_increase_pct.value_or(0.0)) << ","
                << detail::g9(r.original_time.value_or(0.0)) << ","
                << detail::g9(r.feature_time) << ","
                << detail::g9(r.solve_time) << ","
                << detail::g9(r.runtime_decrease_pct.value_or(0.0)) << ","
                << r.status << "\n";
        }
    }

    // tradeoff_<instance>.csv: hard runs, one row per threshold.
    for (const auto* p : test_instances) {
        std::ofstream out(config.out_dir /
                          ("tradeoff_" + p->inst.name() + ".csv"));
        out << "threshold,prune_rate,objective,runtime\n";
        for (const EvalRun& run : result.runs) {
            if (run.report.instance != p->inst.name() || run.soft_budget >= 0)
                continue;
            out << detail::g9(run.threshold) << ","
                << detail::g9(run.report.prune_rate) << ","
                << detail::g9(run.report.objective) << ","
                << detail::g9(run.report.feature_time +
                              run.report.solve_time)
                << "\n";
        }
    }

    result.exit_code = result.errors.empty() ? 0 : 1;
    return result;
}

}  // namespace stprune::bench
