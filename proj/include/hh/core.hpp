#pragma once

#include <concepts>
#include <cstddef>
#include <limits>
#include <vector>

#include <json.hpp>

#include "hh/common.hpp"
#include "hh/kernel.hpp"
#include "hh/transforms.hpp"

namespace hh {

/// One rule of a selector: a point in feature space plus the heuristic to
/// apply when this rule is the nearest one.
struct Rule {
    FeatureVector condition;
    int action = 0;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// The evolved individual: an ordered, variable-length rule list.
struct Selector {
    std::vector<Rule> rules;

    friend bool operator==(const Selector&, const Selector&) = default;
};

inline void validate(const Selector& sel, std::size_t feature_count, std::size_t heuristic_count) {
    if (sel.rules.empty()) throw std::invalid_argument("Selector: needs at least one rule");
    for (const auto& r : sel.rules) {
        if (r.condition.size() != feature_count)
            throw std::invalid_argument("Selector: condition length mismatch");
        if (r.action < 0 || static_cast<std::size_t>(r.action) >= heuristic_count)
            throw std::invalid_argument("Selector: action out of range");
        for (double v : r.condition)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("Selector: condition value outside [0,1]");
    }
}

struct SolveOutcome {
    bool solved = false;
    long steps = 0;
    double cost = 0.0;      // domain cost unit (consistency checks for CSP, steps otherwise)
    double objective = 0.0; // domain objective value
    bool timed_out = false;

    friend bool operator==(const SolveOutcome&, const SolveOutcome&) = default;
};

/// Uniform contract a problem domain implements for the solve loop and the
/// experiment harness.
template <typename D>
concept ProblemDomain = requires(const D& d, const typename D::Instance& inst,
                                 typename D::State& s, const typename D::State& cs, int a) {
    { d.feature_count() } -> std::convertible_to<std::size_t>;
    { d.heuristic_count() } -> std::convertible_to<std::size_t>;
    { d.maximize() } -> std::convertible_to<bool>;
    { d.make_state(inst) } -> std::same_as<typename D::State>;
    { d.compute_features(s) } -> std::same_as<FeatureVector>;
    { d.apply(s, a) };
    { d.finished(cs) } -> std::convertible_to<bool>;
    { d.cost(cs) } -> std::convertible_to<double>;
    { d.objective(cs) } -> std::convertible_to<double>;
};

/// Action of the rule nearest to the query features; exact distance ties go
/// to the earliest rule in list order.
inline int select_action(const Selector& sel, const FeatureVector& features, const Metric& metric) {
    if (sel.rules.empty()) throw std::invalid_argument("select_action: empty selector");
    if (!all_finite(features)) throw std::invalid_argument("select_action: non-finite features");
    int best = sel.rules.front().action;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& r : sel.rules) {
        if (r.condition.size() != features.size())
            throw std::invalid_argument("select_action: dimension mismatch");
        double d = metric(r.condition, features);
        if (d < best_d) {
            best_d = d;
            best = r.action;
        }
    }
    return best;
}

namespace detail {

template <ProblemDomain D, typename Chooser>
SolveOutcome solve_loop(const typename D::Instance& inst, const D& domain, double budget,
                        Chooser&& choose) {
    if (!(budget > 0.0)) throw std::invalid_argument("solve: budget must be > 0");
    auto state = domain.make_state(inst);
    SolveOutcome out;
    while (!domain.finished(state)) {
        if (domain.cost(state) > budget) {
            out.timed_out = true;
            break;
        }
        int action = choose(state);
        domain.apply(state, action);
        ++out.steps;
    }
    out.cost = domain.cost(state);
    out.objective = domain.objective(state);
    out.solved = !out.timed_out && domain.finished(state);
    return out;
}

} // namespace detail

/// The instance-solving loop: recompute features, transform, pick the nearest
/// rule's heuristic, apply it; repeat until the domain reports completion or
/// the cost budget is exceeded.
template <ProblemDomain D>
SolveOutcome solve_instance(const Selector& sel, const typename D::Instance& inst, const D& domain,
                            const TransformSpec& transform, const Metric& metric, double budget) {
    return detail::solve_loop(inst, domain, budget, [&](typename D::State& s) {
        FeatureVector f = apply_spec(transform, domain.compute_features(s));
        return select_action(sel, f, metric);
    });
}

/// Same loop with a constant action: a standalone heuristic run.
template <ProblemDomain D>
SolveOutcome run_heuristic(int heuristic, const typename D::Instance& inst, const D& domain,
                           double budget) {
    if (heuristic < 0 || static_cast<std::size_t>(heuristic) >= domain.heuristic_count())
        throw std::invalid_argument("run_heuristic: heuristic index out of range");
    return detail::solve_loop(inst, domain, budget,
                              [&](typename D::State&) { return heuristic; });
}

/// Per-instance outcome ordering: solved dominates unsolved; among solved,
/// better objective wins (direction per domain); among unsolved likewise.
inline bool outcome_better(const SolveOutcome& a, const SolveOutcome& b, bool maximize) {
    if (a.solved != b.solved) return a.solved;
    if (maximize) return a.objective > b.objective;
    return a.objective < b.objective;
}

struct OracleResult {
    std::vector<int> best_action;      // per instance
    std::vector<SolveOutcome> picked;  // per instance
};

/// Hindsight-best baseline: for each instance, the best standalone-heuristic
/// outcome. outcomes[h][i] = heuristic h on instance i.
inline OracleResult synthetic_oracle(const std::vector<std::vector<SolveOutcome>>& outcomes,
                                     bool maximize) {
    if (outcomes.empty() || outcomes.front().empty())
        throw std::invalid_argument("synthetic_oracle: empty outcome set");
    const std::size_t n = outcomes.front().size();
    for (const auto& row : outcomes)
        if (row.size() != n)
            throw std::invalid_argument("synthetic_oracle: not every heuristic ran on every instance");
    OracleResult res;
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        for (std::size_t h = 1; h < outcomes.size(); ++h)
            if (outcome_better(outcomes[h][i], outcomes[best][i], maximize)) best = static_cast<int>(h);
        res.best_action.push_back(best);
        res.picked.push_back(outcomes[best][i]);
    }
    return res;
}

inline void to_json(nlohmann::json& j, const Rule& r) {
    j = nlohmann::json{{"condition", r.condition}, {"action", r.action}};
}

inline void from_json(const nlohmann::json& j, Rule& r) {
    r.condition = j.at("condition").get<FeatureVector>();
    r.action = j.at("action").get<int>();
}

inline void to_json(nlohmann::json& j, const Selector& s) {
    j = nlohmann::json{{"rules", s.rules}};
}

inline void from_json(const nlohmann::json& j, Selector& s) {
    s.rules = j.at("rules").get<std::vector<Rule>>();
}

} // namespace hh
