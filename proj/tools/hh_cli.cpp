// hh: rule-based selection hyper-heuristics over CSP, 0/1 knapsack, and
// number-partition instances — training, evaluation, scenario experiments,
// baselines, VAT export, and a knapsack instance generator.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hh/hh.hpp"
#include "hh/io.hpp"

namespace fs = std::filesystem;
using namespace hh;

namespace {

struct CommonOpts {
    std::string domain = "knapsack";
    std::string instances;
    std::uint64_t seed = 1;
    double budget = 1e7;
};

struct PipelineOpts {
    std::string transform = "identity"; // identity|linear|s_shaped|exponential, or a JSON file path
    std::string metric = "euclidean";   // euclidean|rbf
    double gamma = 0.0;                 // 0 = 1/N_f
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_instances = true) {
    cmd->add_option("-d,--domain", o.domain, "problem domain")
        ->check(CLI::IsMember({"csp", "knapsack", "partition"}));
    auto* inst = cmd->add_option("-i,--instances", o.instances, "instance file or directory");
    if (needs_instances) inst->required();
    cmd->add_option("-s,--seed", o.seed, "master seed");
    cmd->add_option("-b,--budget", o.budget, "per-instance cost budget");
}

void add_pipeline(CLI::App* cmd, PipelineOpts& o) {
    cmd->add_option("-t,--transform", o.transform,
                    "feature transform kind (fitted on the loaded instances) or a JSON spec file");
    cmd->add_option("-m,--metric", o.metric, "rule-matching distance")
        ->check(CLI::IsMember({"euclidean", "rbf"}));
    cmd->add_option("--gamma", o.gamma, "rbf width (default 1/feature-count)");
}

void add_ga(CLI::App* cmd, ga::GAConfig& g) {
    cmd->add_option("--population", g.population_size, "GA population size");
    cmd->add_option("--cycles", g.cycles, "GA cycles");
    cmd->add_option("--crossover-rate", g.crossover_rate, "crossover probability");
    cmd->add_option("--mutation-rate", g.mutation_rate, "per-rule mutation probability");
    cmd->add_option("--mutation-sigma", g.mutation_sigma, "condition perturbation width");
    cmd->add_option("--min-rules", g.min_rules, "minimum rules per selector");
    cmd->add_option("--max-rules", g.max_rules, "maximum rules per selector");
}

template <ProblemDomain D>
std::vector<FeatureVector> initial_features(const D& domain,
                                            const std::vector<typename D::Instance>& instances) {
    std::vector<FeatureVector> rows;
    for (const auto& inst : instances) {
        auto s = domain.make_state(inst);
        rows.push_back(domain.compute_features(s));
    }
    return rows;
}

template <ProblemDomain D>
TransformSpec resolve_transform(const PipelineOpts& o, const D& domain,
                                const std::vector<typename D::Instance>& instances) {
    if (fs::exists(o.transform) && !fs::is_directory(o.transform))
        return io::load_transform(o.transform);
    return make_transform(transform_kind_from_string(o.transform),
                          initial_features(domain, instances));
}

template <ProblemDomain D>
Metric resolve_metric(const PipelineOpts& o, const D& domain) {
    if (o.metric == "rbf")
        return Metric::rbf(o.gamma > 0.0 ? o.gamma
                                         : default_gamma(static_cast<int>(domain.feature_count())));
    return Metric::euclidean();
}

std::vector<harness::Scenario> parse_scenarios(const std::string& csv) {
    std::vector<harness::Scenario> out;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(harness::scenario_from_string(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (out.empty()) throw std::invalid_argument("no scenarios given");
    return out;
}

// Dispatch one callable over the domain named in the options.
template <typename Fn>
int with_domain(const CommonOpts& o, Fn&& fn) {
    if (o.domain == "csp") return fn(csp::CspDomain{}, io::load_csp_instances(o.instances));
    if (o.domain == "knapsack")
        return fn(knapsack::KnapsackDomain{}, io::load_knapsack_instances(o.instances));
    return fn(partition::PartitionDomain{}, io::load_partition_instances(o.instances));
}

template <ProblemDomain D>
void print_metrics_csv(const D& domain, const std::vector<SolveOutcome>& outcomes,
                       const std::string& label) {
    auto names = harness::report_metric_names(domain);
    auto values = harness::report_metrics(domain, outcomes);
    std::printf("solver");
    for (const auto& n : names) std::printf(",%s", n.c_str());
    std::printf("\n%s", label.c_str());
    for (double v : values) std::printf(",%.17g", v);
    std::printf("\n");
}

int cmd_train(const CommonOpts& common, const PipelineOpts& pipe, const ga::GAConfig& ga_in,
              const std::string& out, const std::string& transform_out,
              const std::string& history_out) {
    return with_domain(common, [&](const auto& domain, const auto& instances) {
        auto transform = resolve_transform(pipe, domain, instances);
        auto metric = resolve_metric(pipe, domain);
        ga::GAConfig cfg = ga_in;
        cfg.seed = common.seed;
        cfg.budget = common.budget;
        auto res = ga::train(cfg, domain, instances, transform, metric);
        io::save_selector(res.best, out);
        if (!transform_out.empty()) io::save_transform(transform, transform_out);
        if (!history_out.empty()) io::write_file(history_out, ga::history_csv(res.history));
        std::printf("trained on %zu instances; best fitness %.17g (%d solved); %zu rules -> %s\n",
                    instances.size(), res.best_fitness.total, res.best_fitness.solved,
                    res.best.rules.size(), out.c_str());
        return 0;
    });
}

int cmd_evaluate(const CommonOpts& common, const PipelineOpts& pipe,
                 const std::string& selector_path) {
    return with_domain(common, [&](const auto& domain, const auto& instances) {
        auto sel = io::load_selector(selector_path);
        validate(sel, domain.feature_count(), domain.heuristic_count());
        auto transform = resolve_transform(pipe, domain, instances);
        auto metric = resolve_metric(pipe, domain);
        std::vector<SolveOutcome> outcomes;
        for (const auto& inst : instances)
            outcomes.push_back(solve_instance(sel, inst, domain, transform, metric, common.budget));
        print_metrics_csv(domain, outcomes, "selector");
        return 0;
    });
}

int cmd_oracle(const CommonOpts& common) {
    return with_domain(common, [&](const auto& domain, const auto& instances) {
        auto base = harness::baseline_outcomes(domain, instances, common.budget);
        auto names = harness::report_metric_names(domain);
        std::printf("solver");
        for (const auto& n : names) std::printf(",%s", n.c_str());
        std::printf("\n");
        auto hnames = domain.heuristic_names();
        for (std::size_t h = 0; h < base.size(); ++h) {
            std::printf("%s", hnames[h].c_str());
            for (double v : harness::report_metrics(domain, base[h])) std::printf(",%.17g", v);
            std::printf("\n");
        }
        auto oracle = synthetic_oracle(base, domain.maximize());
        std::printf("oracle");
        for (double v : harness::report_metrics(domain, oracle.picked)) std::printf(",%.17g", v);
        std::printf("\n");
        return 0;
    });
}

int cmd_vat(const CommonOpts& common, const PipelineOpts& pipe, const std::string& out_prefix) {
    return with_domain(common, [&](const auto& domain, const auto& instances) {
        if (instances.size() < 2) throw std::invalid_argument("vat: need at least 2 instances");
        auto transform = resolve_transform(pipe, domain, instances);
        auto metric = resolve_metric(pipe, domain);
        std::vector<FeatureVector> points;
        for (auto& row : initial_features(domain, instances))
            points.push_back(apply_spec(transform, row));
        // group by the hindsight-best heuristic so block structure is visible
        auto base = harness::baseline_outcomes(domain, instances, common.budget);
        auto oracle = synthetic_oracle(base, domain.maximize());
        harness::emit_vat(points, oracle.best_action, metric, out_prefix);
        std::printf("wrote %s.pgm and %s.csv (%zu points)\n", out_prefix.c_str(),
                    out_prefix.c_str(), points.size());
        return 0;
    });
}

int cmd_experiment(const CommonOpts& common, harness::ExperimentConfig cfg,
                   const std::string& scenario_csv, const std::string& outdir) {
    cfg.scenarios = parse_scenarios(scenario_csv);
    cfg.seed = common.seed;
    cfg.ga.budget = common.budget;
    return with_domain(common, [&](const auto& domain, const auto& instances) {
        auto result = harness::run_experiment(cfg, domain, instances);
        harness::write_reports(result, outdir);
        if (cfg.vat) {
            fs::create_directories(fs::path(outdir) / "vat");
            std::vector<typename std::decay_t<decltype(domain)>::Instance> train;
            for (std::size_t i : result.train_indices) train.push_back(instances[i]);
            auto points = initial_features(domain, train);
            auto base = harness::baseline_outcomes(domain, train, cfg.ga.budget);
            auto oracle = synthetic_oracle(base, domain.maximize());
            auto prefix = (fs::path(outdir) / "vat" / "train").string();
            harness::emit_vat(points, oracle.best_action, Metric::euclidean(),
                              prefix + "_euclidean");
            harness::emit_vat(points, oracle.best_action,
                              Metric::rbf(default_gamma(static_cast<int>(domain.feature_count()))),
                              prefix + "_kernel");
        }
        std::printf("experiment complete: %zu runs over %zu scenarios -> %s\n",
                    result.runs.size(), cfg.scenarios.size(), outdir.c_str());
        return 0;
    });
}

int cmd_gen_knapsack(std::size_t count, std::size_t items, const std::string& cls_name,
                     std::uint64_t seed, long value_range, const std::string& outdir) {
    auto cls = knapsack::correlation_class_from_string(cls_name);
    fs::create_directories(outdir);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        auto inst = knapsack::generate_instance(items, cls, rng, value_range);
        char name[32];
        std::snprintf(name, sizeof(name), "%04zu.kp", i);
        io::write_file((fs::path(outdir) / name).string(), knapsack::serialize_knapsack(inst));
    }
    std::printf("wrote %zu %s instances (%zu items each) to %s\n", count, cls_name.c_str(), items,
                outdir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rule-based selection hyper-heuristic toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value config file");

    CommonOpts common;
    PipelineOpts pipe;
    ga::GAConfig ga_cfg;

    // train
    std::string train_out = "selector.json", transform_out, history_out;
    auto* train = app.add_subcommand("train", "evolve a selector on a training set");
    add_common(train, common);
    add_pipeline(train, pipe);
    add_ga(train, ga_cfg);
    train->add_option("-o,--out", train_out, "output selector JSON path");
    train->add_option("--transform-out", transform_out, "also save the fitted transform spec");
    train->add_option("--history", history_out, "write per-cycle fitness CSV");

    // evaluate
    std::string selector_path;
    auto* evaluate = app.add_subcommand("evaluate", "run a saved selector over an instance set");
    add_common(evaluate, common);
    add_pipeline(evaluate, pipe);
    evaluate->add_option("--selector", selector_path, "selector JSON path")->required();

    // experiment
    harness::ExperimentConfig exp_cfg;
    std::string scenario_csv = "O,L,E,S,K,K+L,K+S", exp_out = "reports";
    auto* experiment = app.add_subcommand("experiment", "full scenario-matrix experiment");
    add_common(experiment, common);
    add_ga(experiment, exp_cfg.ga);
    experiment->add_option("--scenarios", scenario_csv, "comma-separated scenario ids");
    experiment->add_option("-r,--repetitions", exp_cfg.repetitions, "trainings per scenario");
    experiment->add_option("--split-fraction", exp_cfg.split_fraction, "training fraction");
    experiment->add_option("--threads", exp_cfg.threads, "worker threads (0 = hardware)");
    experiment->add_flag("--vat", exp_cfg.vat, "also emit VAT images of the training features");
    experiment->add_option("-o,--out", exp_out, "report output directory");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "standalone-heuristic and oracle baselines");
    add_common(oracle, common);

    // vat
    std::string vat_out = "vat";
    auto* vat = app.add_subcommand("vat", "group-sorted pairwise-distance image of instance features");
    add_common(vat, common);
    add_pipeline(vat, pipe);
    vat->add_option("-o,--out", vat_out, "output path prefix (.pgm/.csv appended)");

    // gen-knapsack
    std::size_t gen_count = 100, gen_items = 50;
    std::string gen_class = "uncorrelated", gen_out = "knapsack_instances";
    long gen_range = 1000;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen-knapsack", "generate knapsack instance files");
    gen->add_option("-n,--count", gen_count, "number of instances");
    gen->add_option("--items", gen_items, "items per instance");
    gen->add_option("--class", gen_class, "profit/weight correlation class")
        ->check(CLI::IsMember({"uncorrelated", "weak", "strong"}));
    gen->add_option("-s,--seed", gen_seed, "generator seed");
    gen->add_option("--value-range", gen_range, "weight/profit value range");
    gen->add_option("-o,--out", gen_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(common, pipe, ga_cfg, train_out, transform_out, history_out);
        if (*evaluate) return cmd_evaluate(common, pipe, selector_path);
        if (*experiment) return cmd_experiment(common, exp_cfg, scenario_csv, exp_out);
        if (*oracle) return cmd_oracle(common);
        if (*vat) return cmd_vat(common, pipe, vat_out);
        if (*gen) return cmd_gen_knapsack(gen_count, gen_items, gen_class, gen_seed, gen_range, gen_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
