#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hh/common.hpp"
#include "hh/core.hpp"

namespace hh::ga {

struct GAConfig {
    int population_size = 20;
    double crossover_rate = 1.0;
    double mutation_rate = 0.1;
    double mutation_sigma = 0.1;
    int cycles = 100;
    int min_rules = 2;
    int max_rules = 30;
    std::uint64_t seed = 1;
    double budget = 1e7; // per-instance cost limit
};

inline void validate(const GAConfig& c) {
    if (c.population_size < 2) throw std::invalid_argument("GAConfig: population_size < 2");
    if (c.cycles < 1) throw std::invalid_argument("GAConfig: cycles < 1");
    if (c.crossover_rate < 0.0 || c.crossover_rate > 1.0 || c.mutation_rate < 0.0 ||
        c.mutation_rate > 1.0)
        throw std::invalid_argument("GAConfig: rates must be in [0,1]");
    if (c.min_rules < 1 || c.min_rules > c.max_rules)
        throw std::invalid_argument("GAConfig: need 1 <= min_rules <= max_rules");
    if (!(c.budget > 0.0)) throw std::invalid_argument("GAConfig: budget must be > 0");
}

struct Fitness {
    double total = 0.0;
    int solved = 0;
    bool maximize = false;
};

inline bool fitness_better(const Fitness& a, const Fitness& b) {
    return a.maximize ? a.total > b.total : a.total < b.total;
}

inline Rule random_rule(Rng& rng, std::size_t feature_count, std::size_t heuristic_count) {
    Rule r;
    r.condition.resize(feature_count);
    for (auto& v : r.condition) v = rng.next_double();
    r.action = static_cast<int>(rng.next_below(heuristic_count));
    return r;
}

inline std::vector<Selector> init_population(const GAConfig& cfg, std::size_t feature_count,
                                             std::size_t heuristic_count, Rng& rng) {
    validate(cfg);
    std::vector<Selector> pop;
    for (int i = 0; i < cfg.population_size; ++i) {
        Selector s;
        std::size_t span = static_cast<std::size_t>(cfg.max_rules - cfg.min_rules + 1);
        std::size_t count = static_cast<std::size_t>(cfg.min_rules) + rng.next_below(span);
        for (std::size_t r = 0; r < count; ++r)
            s.rules.push_back(random_rule(rng, feature_count, heuristic_count));
        pop.push_back(std::move(s));
    }
    return pop;
}

namespace detail {

inline void clamp_length(Selector& s, const GAConfig& cfg, std::size_t feature_count,
                         std::size_t heuristic_count, Rng& rng) {
    if (static_cast<int>(s.rules.size()) > cfg.max_rules)
        s.rules.resize(static_cast<std::size_t>(cfg.max_rules));
    while (static_cast<int>(s.rules.size()) < cfg.min_rules)
        s.rules.push_back(random_rule(rng, feature_count, heuristic_count));
}

} // namespace detail

/// Cut-and-splice crossover over variable-length rule lists: one independent
/// cut point per parent, tails swapped, lengths then clamped to the
/// configured range.
inline std::pair<Selector, Selector> crossover(const Selector& p1, const Selector& p2,
                                               const GAConfig& cfg, std::size_t feature_count,
                                               std::size_t heuristic_count, Rng& rng) {
    if (p1.rules.empty() || p2.rules.empty())
        throw std::invalid_argument("crossover: empty parent");
    std::size_t cut1 = rng.next_below(p1.rules.size() + 1);
    std::size_t cut2 = rng.next_below(p2.rules.size() + 1);
    Selector c1, c2;
    c1.rules.assign(p1.rules.begin(), p1.rules.begin() + static_cast<std::ptrdiff_t>(cut1));
    c1.rules.insert(c1.rules.end(), p2.rules.begin() + static_cast<std::ptrdiff_t>(cut2), p2.rules.end());
    c2.rules.assign(p2.rules.begin(), p2.rules.begin() + static_cast<std::ptrdiff_t>(cut2));
    c2.rules.insert(c2.rules.end(), p1.rules.begin() + static_cast<std::ptrdiff_t>(cut1), p1.rules.end());
    detail::clamp_length(c1, cfg, feature_count, heuristic_count, rng);
    detail::clamp_length(c2, cfg, feature_count, heuristic_count, rng);
    return {std::move(c1), std::move(c2)};
}

/// Per-rule mutation: with the given probability, either perturb one
/// condition value by clamped Gaussian noise or reassign the action
/// (coin flip between the two).
inline Selector mutate(Selector s, double rate, double sigma, std::size_t heuristic_count, Rng& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutate: rate outside [0,1]");
    for (auto& rule : s.rules) {
        if (rng.next_double() >= rate) continue;
        if (rng.next_double() < 0.5) {
            std::size_t dim = rng.next_below(rule.condition.size());
            double v = rule.condition[dim] + sigma * rng.next_gaussian();
            rule.condition[dim] = std::max(0.0, std::min(1.0, v));
        } else {
            rule.action = static_cast<int>(rng.next_below(heuristic_count));
        }
    }
    return s;
}

/// Summed domain objective over the full training set.
template <ProblemDomain D>
Fitness evaluate(const Selector& sel, const std::vector<typename D::Instance>& instances,
                 const D& domain, const TransformSpec& transform, const Metric& metric,
                 double budget) {
    if (instances.empty()) throw std::invalid_argument("evaluate: empty training set");
    Fitness f;
    f.maximize = domain.maximize();
    for (const auto& inst : instances) {
        SolveOutcome o = solve_instance(sel, inst, domain, transform, metric, budget);
        f.total += domain.fitness_contribution(o, budget);
        if (o.solved) ++f.solved;
    }
    return f;
}

struct CycleLog {
    int cycle = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::size_t best_rule_count = 0;
};

struct TrainResult {
    Selector best;
    Fitness best_fitness;
    std::vector<CycleLog> history;
};

/// Steady-state evolution: binary-tournament parents, cut-and-splice
/// crossover, mutation; children replace the two worst members only when
/// strictly better. Best-ever selector is tracked separately.
template <ProblemDomain D>
TrainResult train(const GAConfig& cfg, const D& domain,
                  const std::vector<typename D::Instance>& instances,
                  const TransformSpec& transform, const Metric& metric) {
    validate(cfg);
    if (instances.empty()) throw std::invalid_argument("train: empty training set");
    Rng rng(cfg.seed);
    const std::size_t fc = domain.feature_count();
    const std::size_t hc = domain.heuristic_count();

    auto pop = init_population(cfg, fc, hc, rng);
    std::vector<Fitness> fit;
    for (const auto& s : pop)
        fit.push_back(evaluate(s, instances, domain, transform, metric, cfg.budget));

    auto best_index = [&]() {
        std::size_t b = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (fitness_better(fit[i], fit[b])) b = i;
        return b;
    };
    auto worst_index = [&](std::size_t exclude) {
        std::size_t w = exclude == 0 ? 1 : 0;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (i != exclude && fitness_better(fit[w], fit[i])) w = i;
        return w;
    };
    auto tournament = [&]() {
        std::size_t a = rng.next_below(pop.size());
        std::size_t b = rng.next_below(pop.size());
        return fitness_better(fit[b], fit[a]) ? b : a;
    };

    TrainResult result;
    {
        std::size_t b = best_index();
        result.best = pop[b];
        result.best_fitness = fit[b];
    }

    for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
        std::size_t p1 = tournament();
        std::size_t p2 = tournament();
        Selector c1, c2;
        if (rng.next_double() < cfg.crossover_rate) {
            std::tie(c1, c2) = crossover(pop[p1], pop[p2], cfg, fc, hc, rng);
        } else {
            c1 = pop[p1];
            c2 = pop[p2];
        }
        c1 = mutate(std::move(c1), cfg.mutation_rate, cfg.mutation_sigma, hc, rng);
        c2 = mutate(std::move(c2), cfg.mutation_rate, cfg.mutation_sigma, hc, rng);

        for (Selector* child : {&c1, &c2}) {
            Fitness cf = evaluate(*child, instances, domain, transform, metric, cfg.budget);
            std::size_t w = worst_index(pop.size()); // no exclusion
            if (fitness_better(cf, fit[w])) {
                pop[w] = *child;
                fit[w] = cf;
            }
            if (fitness_better(cf, result.best_fitness)) {
                result.best = *child;
                result.best_fitness = cf;
            }
        }

        CycleLog log;
        log.cycle = cycle;
        log.best_fitness = result.best_fitness.total;
        double mean = 0.0;
        for (const auto& f : fit) mean += f.total;
        log.mean_fitness = mean / static_cast<double>(fit.size());
        log.best_rule_count = result.best.rules.size();
        result.history.push_back(log);
    }
    return result;
}

inline std::string history_csv(const std::vector<CycleLog>& history) {
    std::string out = "cycle,best_fitness,mean_fitness,best_rule_count\n";
    for (const auto& h : history)
        out += std::to_string(h.cycle) + "," + std::to_string(h.best_fitness) + "," +
               std::to_string(h.mean_fitness) + "," + std::to_string(h.best_rule_count) + "\n";
    return out;
}

} // namespace hh::ga
