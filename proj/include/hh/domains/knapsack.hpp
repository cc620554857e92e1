#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hh/common.hpp"
#include "hh/core.hpp"

namespace hh::knapsack {

struct Item {
    long profit = 0;
    long weight = 0;

    friend bool operator==(const Item&, const Item&) = default;
};

struct KnapsackInstance {
    long capacity = 0;
    std::vector<Item> items;

    friend bool operator==(const KnapsackInstance&, const KnapsackInstance&) = default;
};

inline void validate(const KnapsackInstance& inst) {
    if (inst.capacity < 0) throw std::invalid_argument("KnapsackInstance: negative capacity");
    for (const auto& it : inst.items)
        if (it.profit <= 0 || it.weight <= 0)
            throw std::invalid_argument("KnapsackInstance: profits and weights must be positive");
}

/// Text format: item count, capacity, then one "profit weight" line per item.
inline KnapsackInstance parse_knapsack(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long n = -1, lineno = 0;
    KnapsackInstance inst;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };
    auto fail = [&](const std::string& what) -> void {
        throw ParseError("parse_knapsack: " + what + " at line " + std::to_string(lineno));
    };
    if (!next_line()) fail("missing item count");
    {
        std::istringstream ls(line);
        if (!(ls >> n) || n < 0) fail("bad item count");
    }
    if (!next_line()) fail("missing capacity");
    {
        std::istringstream ls(line);
        if (!(ls >> inst.capacity) || inst.capacity < 0) fail("bad capacity");
    }
    for (long i = 0; i < n; ++i) {
        if (!next_line()) fail("missing item line");
        std::istringstream ls(line);
        Item it;
        if (!(ls >> it.profit >> it.weight)) fail("malformed item line");
        if (it.profit <= 0 || it.weight <= 0) fail("nonpositive profit or weight");
        inst.items.push_back(it);
    }
    return inst;
}

inline std::string serialize_knapsack(const KnapsackInstance& inst) {
    std::ostringstream out;
    out << inst.items.size() << "\n" << inst.capacity << "\n";
    for (const auto& it : inst.items) out << it.profit << " " << it.weight << "\n";
    return out.str();
}

/// Packing state. Candidates are unpacked items that still fit the remaining
/// capacity; the rollout ends when none do.
struct PackingState {
    const KnapsackInstance* instance = nullptr;
    std::vector<int> candidates; // item indices, ascending
    std::vector<int> packed;
    long remaining = 0;
    long profit = 0;
    long steps = 0;
};

inline void refilter(PackingState& s) {
    std::erase_if(s.candidates,
                  [&](int i) { return s.instance->items[static_cast<std::size_t>(i)].weight > s.remaining; });
}

namespace detail {

struct Moments {
    double mean = 0.0, median = 0.0, stddev = 0.0;
};

// Population standard deviation; midpoint median for even counts.
inline Moments moments(std::vector<double> xs) {
    Moments m;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) m.mean += x;
    m.mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / n);
    std::sort(xs.begin(), xs.end());
    std::size_t h = xs.size() / 2;
    m.median = xs.size() % 2 ? xs[h] : (xs[h - 1] + xs[h]) / 2.0;
    return m;
}

} // namespace detail

/// Seven features over the remaining candidates, normalized dynamically:
/// profit mean/median/stddev over the current max profit, the same for
/// weight, and the profit-weight Pearson correlation shifted into [0,1].
inline FeatureVector compute_features(const PackingState& s) {
    if (s.candidates.empty())
        return FeatureVector(7, 0.0); // terminal state, never queried by the solve loop
    std::vector<double> ps, ws;
    double pmax = 0.0, wmax = 0.0;
    for (int i : s.candidates) {
        const auto& it = s.instance->items[static_cast<std::size_t>(i)];
        ps.push_back(static_cast<double>(it.profit));
        ws.push_back(static_cast<double>(it.weight));
        pmax = std::max(pmax, ps.back());
        wmax = std::max(wmax, ws.back());
    }
    auto mp = detail::moments(ps);
    auto mw = detail::moments(ws);
    double r = 0.0; // zero-variance convention
    double sp = 0.0, sw = 0.0, spw = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        sp += (ps[i] - mp.mean) * (ps[i] - mp.mean);
        sw += (ws[i] - mw.mean) * (ws[i] - mw.mean);
        spw += (ps[i] - mp.mean) * (ws[i] - mw.mean);
    }
    if (sp > 0.0 && sw > 0.0) r = spw / std::sqrt(sp * sw);
    return {mp.mean / pmax,   mp.median / pmax, mp.stddev / pmax, mw.mean / wmax,
            mw.median / wmax, mw.stddev / wmax, (r + 1.0) / 2.0};
}

/// Each returns an index into the instance item list; ties break to the
/// lowest item index (candidates are kept ascending).
inline int heuristic_max_profit(const PackingState& s) {
    int best = s.candidates.front();
    for (int i : s.candidates)
        if (s.instance->items[static_cast<std::size_t>(i)].profit >
            s.instance->items[static_cast<std::size_t>(best)].profit)
            best = i;
    return best;
}

inline int heuristic_min_weight(const PackingState& s) {
    int best = s.candidates.front();
    for (int i : s.candidates)
        if (s.instance->items[static_cast<std::size_t>(i)].weight <
            s.instance->items[static_cast<std::size_t>(best)].weight)
            best = i;
    return best;
}

inline int heuristic_best_ratio(const PackingState& s) {
    int best = s.candidates.front();
    auto ratio_less = [&](int a, int b) {
        const auto& ia = s.instance->items[static_cast<std::size_t>(a)];
        const auto& ib = s.instance->items[static_cast<std::size_t>(b)];
        // a/b ratio comparison on integers, no rounding
        return ia.profit * ib.weight < ib.profit * ia.weight;
    };
    for (int i : s.candidates)
        if (ratio_less(best, i)) best = i;
    return best;
}

inline int heuristic_default_order(const PackingState& s) { return s.candidates.front(); }

class KnapsackDomain {
public:
    using Instance = KnapsackInstance;
    using State = PackingState;

    std::size_t feature_count() const { return 7; }
    std::size_t heuristic_count() const { return 4; }
    bool maximize() const { return true; }

    std::vector<std::string> heuristic_names() const {
        return {"max_profit", "min_weight", "best_ratio", "default_order"};
    }

    State make_state(const Instance& inst) const {
        validate(inst);
        State s;
        s.instance = &inst;
        s.remaining = inst.capacity;
        for (int i = 0; i < static_cast<int>(inst.items.size()); ++i) s.candidates.push_back(i);
        refilter(s);
        return s;
    }

    FeatureVector compute_features(State& s) const { return knapsack::compute_features(s); }

    void apply(State& s, int action) const {
        if (s.candidates.empty()) throw std::invalid_argument("KnapsackDomain::apply: nothing fits");
        int item;
        switch (action) {
        case 0: item = heuristic_max_profit(s); break;
        case 1: item = heuristic_min_weight(s); break;
        case 2: item = heuristic_best_ratio(s); break;
        case 3: item = heuristic_default_order(s); break;
        default: throw std::invalid_argument("KnapsackDomain::apply: bad action");
        }
        apply_pack(s, item);
    }

    static void apply_pack(State& s, int item) {
        auto it = std::find(s.candidates.begin(), s.candidates.end(), item);
        if (it == s.candidates.end())
            throw std::invalid_argument("apply_pack: item is not a remaining candidate");
        const auto& rec = s.instance->items[static_cast<std::size_t>(item)];
        s.candidates.erase(it);
        s.packed.push_back(item);
        s.remaining -= rec.weight;
        s.profit += rec.profit;
        ++s.steps;
        refilter(s);
    }

    bool finished(const State& s) const { return s.candidates.empty(); }
    double cost(const State& s) const { return static_cast<double>(s.steps); }
    double objective(const State& s) const { return static_cast<double>(s.profit); }

    /// GA fitness contribution: packed profit (maximization).
    double fitness_contribution(const SolveOutcome& o, double /*budget*/) const {
        return o.objective;
    }
};

inline double total_profit(const std::vector<SolveOutcome>& outcomes) {
    double total = 0.0;
    for (const auto& o : outcomes) total += o.objective;
    return total;
}

/// Seeded instance generator approximating the classic uncorrelated, weakly
/// correlated, and strongly correlated classes. Capacity is half the total
/// weight.
enum class CorrelationClass { uncorrelated, weak, strong };

inline CorrelationClass correlation_class_from_string(const std::string& s) {
    if (s == "uncorrelated") return CorrelationClass::uncorrelated;
    if (s == "weak") return CorrelationClass::weak;
    if (s == "strong") return CorrelationClass::strong;
    throw std::invalid_argument("unknown knapsack class: " + s);
}

inline KnapsackInstance generate_instance(std::size_t items, CorrelationClass cls, Rng& rng,
                                          long value_range = 1000) {
    KnapsackInstance inst;
    long total_weight = 0;
    for (std::size_t i = 0; i < items; ++i) {
        Item it;
        it.weight = 1 + static_cast<long>(rng.next_below(static_cast<std::size_t>(value_range)));
        switch (cls) {
        case CorrelationClass::uncorrelated:
            it.profit = 1 + static_cast<long>(rng.next_below(static_cast<std::size_t>(value_range)));
            break;
        case CorrelationClass::weak: {
            long spread = value_range / 10;
            long delta = static_cast<long>(rng.next_below(static_cast<std::size_t>(2 * spread + 1))) - spread;
            it.profit = std::max(1L, it.weight + delta);
            break;
        }
        case CorrelationClass::strong: it.profit = it.weight + value_range / 10; break;
        }
        total_weight += it.weight;
        inst.items.push_back(it);
    }
    inst.capacity = total_weight / 2;
    return inst;
}

} // namespace hh::knapsack
