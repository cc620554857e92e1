#pragma once

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "hh/common.hpp"
#include "hh/core.hpp"

namespace hh::partition {

struct PartitionInstance {
    std::vector<long> items;
};

inline void validate(const PartitionInstance& inst) {
    if (inst.items.empty()) throw std::invalid_argument("PartitionInstance: no items");
    for (long x : inst.items)
        if (x <= 0) throw std::invalid_argument("PartitionInstance: items must be positive");
}

/// Two-subset split state. All items start in subset 1; heuristics move one
/// item per step into subset 2 until its value share reaches one half.
struct PartitionState {
    std::vector<long> subset1; // in original order, so ties go to first occurrence
    std::vector<long> subset2;
    long sum1 = 0;
    long sum2 = 0;
    long steps = 0;
};

inline long quality(const PartitionState& s) { return std::labs(s.sum1 - s.sum2); }

/// Value share of subset 2; strictly increasing along any rollout.
inline double feature_f1(const PartitionState& s) {
    long total = s.sum1 + s.sum2;
    if (total <= 0) throw std::invalid_argument("feature_f1: total item sum must be positive");
    return static_cast<double>(s.sum2) / static_cast<double>(total);
}

inline bool finished(const PartitionState& s) { return feature_f1(s) >= 0.5; }

/// Index into subset1 of the item the heuristic moves next.
inline std::size_t heuristic_max_load(const PartitionState& s) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.subset1.size(); ++i)
        if (s.subset1[i] > s.subset1[best]) best = i;
    return best;
}

inline std::size_t heuristic_min_load(const PartitionState& s) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.subset1.size(); ++i)
        if (s.subset1[i] < s.subset1[best]) best = i;
    return best;
}

class PartitionDomain {
public:
    using Instance = PartitionInstance;
    using State = PartitionState;

    std::size_t feature_count() const { return 1; }
    std::size_t heuristic_count() const { return 2; }
    bool maximize() const { return false; }

    std::vector<std::string> heuristic_names() const { return {"max_load", "min_load"}; }

    State make_state(const Instance& inst) const {
        validate(inst);
        State s;
        s.subset1 = inst.items;
        s.sum1 = std::accumulate(inst.items.begin(), inst.items.end(), 0L);
        return s;
    }

    FeatureVector compute_features(State& s) const { return {feature_f1(s)}; }

    void apply(State& s, int action) const {
        if (s.subset1.empty() || finished(s))
            throw std::invalid_argument("PartitionDomain::apply: no move available");
        std::size_t idx = action == 0 ? heuristic_max_load(s) : heuristic_min_load(s);
        long item = s.subset1[idx];
        s.subset1.erase(s.subset1.begin() + static_cast<std::ptrdiff_t>(idx));
        s.subset2.push_back(item);
        s.sum1 -= item;
        s.sum2 += item;
        ++s.steps;
    }

    bool finished(const State& s) const { return partition::finished(s); }
    double cost(const State& s) const { return static_cast<double>(s.steps); }
    double objective(const State& s) const { return static_cast<double>(quality(s)); }

    /// GA fitness contribution: the achieved Q (minimization).
    double fitness_contribution(const SolveOutcome& o, double /*budget*/) const {
        return o.objective;
    }
};

} // namespace hh::partition
