#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hh/common.hpp"
#include "hh/core.hpp"
#include "hh/domains/csp.hpp"
#include "hh/domains/knapsack.hpp"
#include "hh/domains/partition.hpp"
#include "hh/ga.hpp"
#include "hh/harness/scenario.hpp"
#include "hh/harness/vat.hpp"
#include "hh/stats.hpp"

namespace hh::harness {

struct ExperimentConfig {
    double split_fraction = 0.05;
    std::vector<Scenario> scenarios{Scenario::original};
    int repetitions = 15;
    ga::GAConfig ga;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = hardware concurrency
    bool vat = false;
};

inline void validate(const ExperimentConfig& c) {
    if (c.scenarios.empty()) throw std::invalid_argument("ExperimentConfig: no scenarios");
    if (c.repetitions < 1) throw std::invalid_argument("ExperimentConfig: repetitions < 1");
    if (!(c.split_fraction > 0.0 && c.split_fraction < 1.0))
        throw std::invalid_argument("ExperimentConfig: split fraction outside (0,1)");
    ga::validate(c.ga);
}

// Per-domain report metrics (name, direction, computation from test outcomes).

inline std::vector<std::string> report_metric_names(const csp::CspDomain&) {
    return {"SR", "ACC", "CC"};
}
inline std::vector<bool> report_metric_maximize(const csp::CspDomain&) {
    return {true, false, false};
}
inline std::vector<double> report_metrics(const csp::CspDomain&,
                                          const std::vector<SolveOutcome>& outcomes) {
    auto m = csp::csp_metrics(outcomes);
    return {m.sr, m.acc, m.cc_total};
}

inline std::vector<std::string> report_metric_names(const knapsack::KnapsackDomain&) {
    return {"profit"};
}
inline std::vector<bool> report_metric_maximize(const knapsack::KnapsackDomain&) { return {true}; }
inline std::vector<double> report_metrics(const knapsack::KnapsackDomain&,
                                          const std::vector<SolveOutcome>& outcomes) {
    return {knapsack::total_profit(outcomes)};
}

inline std::vector<std::string> report_metric_names(const partition::PartitionDomain&) {
    return {"total_q"};
}
inline std::vector<bool> report_metric_maximize(const partition::PartitionDomain&) {
    return {false};
}
inline std::vector<double> report_metrics(const partition::PartitionDomain&,
                                          const std::vector<SolveOutcome>& outcomes) {
    double q = 0.0;
    for (const auto& o : outcomes) q += o.objective;
    return {q};
}

/// Every standalone heuristic run on every instance: result[h][i].
template <ProblemDomain D>
std::vector<std::vector<SolveOutcome>> baseline_outcomes(const D& domain,
                                                         const std::vector<typename D::Instance>& instances,
                                                         double budget) {
    std::vector<std::vector<SolveOutcome>> out(domain.heuristic_count());
    for (std::size_t h = 0; h < domain.heuristic_count(); ++h)
        for (const auto& inst : instances)
            out[h].push_back(run_heuristic(static_cast<int>(h), inst, domain, budget));
    return out;
}

struct RunRecord {
    Scenario scenario = Scenario::original;
    int repetition = 0;
    std::uint64_t seed = 0;
    Selector selector;
    std::vector<double> metrics;
};

struct ExperimentResult {
    std::vector<std::string> metric_names;
    std::vector<bool> metric_maximize;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::vector<std::pair<std::string, std::vector<double>>> baselines; // heuristics + oracle
    std::vector<RunRecord> runs; // scenario-major, repetition order
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

template <typename Job>
void run_parallel(std::size_t count, unsigned threads, Job&& job) {
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(count));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

/// The full scenario-matrix experiment: split instances, fit per-scenario
/// pipelines on the training features, train `repetitions` selectors per
/// scenario on independent derived seeds, evaluate each on the test split,
/// and compute standalone-heuristic and oracle baselines once.
template <ProblemDomain D>
ExperimentResult run_experiment(const ExperimentConfig& cfg, const D& domain,
                                const std::vector<typename D::Instance>& instances) {
    validate(cfg);
    ExperimentResult result;
    result.metric_names = report_metric_names(domain);
    result.metric_maximize = report_metric_maximize(domain);

    std::tie(result.train_indices, result.test_indices) =
        split_instances(instances.size(), cfg.split_fraction, derive_seed(cfg.seed, 0, 0));

    std::vector<typename D::Instance> train, test;
    for (std::size_t i : result.train_indices) train.push_back(instances[i]);
    for (std::size_t i : result.test_indices) test.push_back(instances[i]);

    // raw initial features of the training instances, for transform fitting
    std::vector<FeatureVector> train_features;
    for (const auto& inst : train) {
        auto s = domain.make_state(inst);
        train_features.push_back(domain.compute_features(s));
    }

    auto baselines = baseline_outcomes(domain, test, cfg.ga.budget);
    for (std::size_t h = 0; h < baselines.size(); ++h)
        result.baselines.emplace_back(domain.heuristic_names()[h],
                                      report_metrics(domain, baselines[h]));
    auto oracle = synthetic_oracle(baselines, domain.maximize());
    result.baselines.emplace_back("oracle", report_metrics(domain, oracle.picked));

    std::vector<ScenarioPipeline> pipelines;
    for (Scenario s : cfg.scenarios)
        pipelines.push_back(build_scenario(s, train_features, domain.feature_count()));

    const auto reps = static_cast<std::size_t>(cfg.repetitions);
    result.runs.resize(cfg.scenarios.size() * reps);
    detail::run_parallel(result.runs.size(), cfg.threads, [&](std::size_t cell) {
        std::size_t si = cell / reps;
        std::size_t rep = cell % reps;
        RunRecord rec;
        rec.scenario = cfg.scenarios[si];
        rec.repetition = static_cast<int>(rep);
        // Seeds are keyed by repetition only and shared across scenarios:
        // adding or removing scenarios never perturbs another scenario's
        // stream, and scenarios that only change the distance or transform
        // are compared against identical GA randomness.
        rec.seed = derive_seed(cfg.seed, 1, rep);
        ga::GAConfig ga_cfg = cfg.ga;
        ga_cfg.seed = rec.seed;
        auto trained = ga::train(ga_cfg, domain, train, pipelines[si].transform, pipelines[si].metric);
        rec.selector = std::move(trained.best);
        std::vector<SolveOutcome> outcomes;
        for (const auto& inst : test)
            outcomes.push_back(solve_instance(rec.selector, inst, domain, pipelines[si].transform,
                                              pipelines[si].metric, ga_cfg.budget));
        rec.metrics = report_metrics(domain, outcomes);
        result.runs[cell] = std::move(rec);
    });
    return result;
}

/// Per-run metric values for one scenario, in repetition order.
inline std::vector<double> scenario_metric(const ExperimentResult& r, Scenario s, std::size_t metric) {
    std::vector<double> out;
    for (const auto& run : r.runs)
        if (run.scenario == s) out.push_back(run.metrics.at(metric));
    return out;
}

struct PValueRow {
    Scenario scenario;
    std::string metric;
    double p = 0.5;
    bool degenerate = false;
};

/// One-tailed Wilcoxon rank-sum of each scenario against O, testing for
/// improvement in the metric's preferred direction.
inline std::vector<PValueRow> pvalues_vs_original(const ExperimentResult& r) {
    std::vector<PValueRow> rows;
    auto base_present = std::any_of(r.runs.begin(), r.runs.end(), [](const RunRecord& run) {
        return run.scenario == Scenario::original;
    });
    if (!base_present) return rows;
    for (std::size_t m = 0; m < r.metric_names.size(); ++m) {
        auto original = scenario_metric(r, Scenario::original, m);
        for (Scenario s : {Scenario::linear, Scenario::exponential, Scenario::s_shaped,
                           Scenario::kernel, Scenario::kernel_linear, Scenario::kernel_s_shaped}) {
            auto sample = scenario_metric(r, s, m);
            if (sample.empty()) continue;
            auto res = stats::wilcoxon_one_tailed(
                original, sample, r.metric_maximize[m] ? stats::Tail::b_greater : stats::Tail::b_less);
            rows.push_back({s, r.metric_names[m], res.p, res.degenerate});
        }
    }
    return rows;
}

inline std::string runs_csv(const ExperimentResult& r) {
    std::string out = "scenario,repetition,seed";
    for (const auto& name : r.metric_names) out += "," + name;
    out += "\n";
    for (const auto& run : r.runs) {
        out += to_string(run.scenario) + "," + std::to_string(run.repetition) + "," +
               std::to_string(run.seed);
        for (double v : run.metrics) out += "," + detail::fmt(v);
        out += "\n";
    }
    return out;
}

inline std::string summary_csv(const ExperimentResult& r) {
    std::string out = "scenario,metric,n,mean,median,stddev,lq,uq\n";
    for (Scenario s : {Scenario::original, Scenario::linear, Scenario::exponential,
                       Scenario::s_shaped, Scenario::kernel, Scenario::kernel_linear,
                       Scenario::kernel_s_shaped}) {
        for (std::size_t m = 0; m < r.metric_names.size(); ++m) {
            auto sample = scenario_metric(r, s, m);
            if (sample.empty()) continue;
            auto sum = stats::summarize(sample);
            out += to_string(s) + "," + r.metric_names[m] + "," + std::to_string(sum.n) + "," +
                   detail::fmt(sum.mean) + "," + detail::fmt(sum.median) + "," +
                   detail::fmt(sum.stddev) + "," + detail::fmt(sum.lq) + "," + detail::fmt(sum.uq) +
                   "\n";
        }
    }
    return out;
}

inline std::string pvalues_csv(const std::vector<PValueRow>& rows) {
    std::string out = "scenario,metric,p_value,degenerate\n";
    for (const auto& row : rows)
        out += to_string(row.scenario) + "," + row.metric + "," + detail::fmt(row.p) + "," +
               (row.degenerate ? "1" : "0") + "\n";
    return out;
}

inline std::string baselines_csv(const ExperimentResult& r) {
    std::string out = "solver";
    for (const auto& name : r.metric_names) out += "," + name;
    out += "\n";
    for (const auto& [name, metrics] : r.baselines) {
        out += name;
        for (double v : metrics) out += "," + detail::fmt(v);
        out += "\n";
    }
    return out;
}

/// Write the standard report set under outdir: runs.csv, summary.csv,
/// pvalues.csv, baselines.csv, and selectors/<scenario>_<rep>.json.
inline void write_reports(const ExperimentResult& r, const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(outdir) / "selectors");
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(fs::path(outdir) / name);
        if (!out) throw std::runtime_error("write_reports: cannot open " + name);
        out << body;
    };
    write("runs.csv", runs_csv(r));
    write("summary.csv", summary_csv(r));
    write("pvalues.csv", pvalues_csv(pvalues_vs_original(r)));
    write("baselines.csv", baselines_csv(r));
    for (const auto& run : r.runs) {
        std::string name = to_string(run.scenario);
        std::replace(name.begin(), name.end(), '+', '_');
        write("selectors/" + name + "_" + std::to_string(run.repetition) + ".json",
              nlohmann::json(run.selector).dump(2) + "\n");
    }
}

} // namespace hh::harness
