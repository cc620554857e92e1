#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hh/common.hpp"

namespace hh::stats {

/// Linear-interpolation (type-7) quantile of a sorted sample.
inline double quantile_type7(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile_type7: empty sample");
    if (sorted.size() == 1) return sorted.front();
    double h = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // sample (n-1) denominator
    double lq = 0.0;
    double uq = 0.0;
    std::vector<double> mild_outliers;    // between the 1.5*IQR and 3*IQR fences
    std::vector<double> extreme_outliers; // beyond the 3*IQR fences
};

inline SampleSummary summarize(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("summarize: empty sample");
    SampleSummary s;
    s.n = xs.size();
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    std::sort(xs.begin(), xs.end());
    s.median = quantile_type7(xs, 0.5);
    s.lq = quantile_type7(xs, 0.25);
    s.uq = quantile_type7(xs, 0.75);
    double iqr = s.uq - s.lq;
    double mild_lo = s.lq - 1.5 * iqr, mild_hi = s.uq + 1.5 * iqr;
    double ext_lo = s.lq - 3.0 * iqr, ext_hi = s.uq + 3.0 * iqr;
    for (double x : xs) {
        if (x < ext_lo || x > ext_hi)
            s.extreme_outliers.push_back(x);
        else if (x < mild_lo || x > mild_hi)
            s.mild_outliers.push_back(x);
    }
    return s;
}

enum class Tail { b_greater, b_less };

struct WilcoxonResult {
    double p = 0.5;
    double statistic = 0.0; // rank sum of sample b
    bool degenerate = false;
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Midranks of the pooled sample plus the tie-correction term sum(t^3 - t).
inline std::pair<std::vector<double>, double> midranks(std::vector<double> pooled) {
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> ranks(pooled.size());
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    return {ranks, tie_term};
}

} // namespace detail

/// One-tailed rank-sum (Mann-Whitney-Wilcoxon) test for independent samples,
/// normal approximation with tie and continuity corrections. Tail::b_greater
/// tests whether sample_b tends to exceed sample_a.
inline WilcoxonResult wilcoxon_one_tailed(const std::vector<double>& sample_a,
                                          const std::vector<double>& sample_b, Tail tail) {
    if (sample_a.size() < 3 || sample_b.size() < 3)
        throw std::invalid_argument("wilcoxon_one_tailed: need at least 3 observations per sample");
    const double na = static_cast<double>(sample_a.size());
    const double nb = static_cast<double>(sample_b.size());
    const double n = na + nb;

    std::vector<double> pooled = sample_a;
    pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
    auto [ranks, tie_term] = detail::midranks(std::move(pooled));

    double w = 0.0; // rank sum of b
    for (std::size_t i = sample_a.size(); i < ranks.size(); ++i) w += ranks[i];

    WilcoxonResult res;
    res.statistic = w;
    double mu = nb * (n + 1.0) / 2.0;
    double var = na * nb * (n + 1.0) / 12.0 - na * nb * tie_term / (12.0 * n * (n - 1.0));
    if (var <= 0.0) {
        res.degenerate = true; // all observations tied
        res.p = 0.5;
        return res;
    }
    double sd = std::sqrt(var);
    double z = tail == Tail::b_greater ? (w - mu - 0.5) / sd : (w - mu + 0.5) / sd;
    double p = tail == Tail::b_greater ? 1.0 - detail::normal_cdf(z) : detail::normal_cdf(z);
    res.p = std::min(1.0 - 1e-15, std::max(1e-15, p));
    return res;
}

/// One-tailed signed-rank test for paired samples, kept available for
/// paired-seed experiments. Tail::b_greater tests b - a > 0.
inline WilcoxonResult wilcoxon_signed_rank_one_tailed(const std::vector<double>& sample_a,
                                                      const std::vector<double>& sample_b,
                                                      Tail tail) {
    if (sample_a.size() != sample_b.size())
        throw std::invalid_argument("wilcoxon_signed_rank: samples must be paired");
    if (sample_a.size() < 3)
        throw std::invalid_argument("wilcoxon_signed_rank: need at least 3 pairs");
    std::vector<double> diffs, mags;
    for (std::size_t i = 0; i < sample_a.size(); ++i) {
        double d = sample_b[i] - sample_a[i];
        if (d != 0.0) {
            diffs.push_back(d);
            mags.push_back(std::fabs(d));
        }
    }
    WilcoxonResult res;
    if (diffs.empty()) {
        res.degenerate = true;
        return res;
    }
    auto [ranks, tie_term] = detail::midranks(mags);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (diffs[i] > 0.0) w_plus += ranks[i];
    const double n = static_cast<double>(diffs.size());
    res.statistic = w_plus;
    double mu = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) {
        res.degenerate = true;
        return res;
    }
    double sd = std::sqrt(var);
    double z = tail == Tail::b_greater ? (w_plus - mu - 0.5) / sd : (w_plus - mu + 0.5) / sd;
    double p = tail == Tail::b_greater ? 1.0 - detail::normal_cdf(z) : detail::normal_cdf(z);
    res.p = std::min(1.0 - 1e-15, std::max(1e-15, p));
    return res;
}

} // namespace hh::stats
