#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hh/common.hpp"

namespace hh {

enum class KernelKind { linear, polynomial, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    int degree = 2;     // polynomial only, >= 1
    double gamma = 1.0; // rbf only, > 0
};

inline void validate(const KernelSpec& k) {
    if (k.kind == KernelKind::polynomial && k.degree < 1)
        throw std::invalid_argument("KernelSpec: polynomial degree must be >= 1");
    if (k.kind == KernelKind::rbf && !(k.gamma > 0.0))
        throw std::invalid_argument("KernelSpec: rbf gamma must be > 0");
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("squared_euclidean: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double kernel_eval(const KernelSpec& spec, std::span<const double> x1,
                          std::span<const double> x2) {
    if (x1.size() != x2.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    validate(spec);
    switch (spec.kind) {
    case KernelKind::linear: return dot(x1, x2);
    case KernelKind::polynomial: return std::pow(dot(x1, x2) + 1.0, spec.degree);
    case KernelKind::rbf: return std::exp(-spec.gamma * squared_euclidean(x1, x2));
    }
    return 0.0;
}

/// Squared distance in the kernel-induced feature space:
/// K(x1,x1) - 2K(x1,x2) + K(x2,x2). With the linear kernel this reduces to
/// the squared Euclidean distance.
inline double kernel_distance_sq(const KernelSpec& spec, std::span<const double> x1,
                                 std::span<const double> x2) {
    double d = kernel_eval(spec, x1, x1) - 2.0 * kernel_eval(spec, x1, x2) +
               kernel_eval(spec, x2, x2);
    return std::max(0.0, d); // guard rounding at coincident points
}

/// Default rbf width: the reciprocal of the feature count.
inline double default_gamma(int feature_count) {
    if (feature_count < 1) throw std::invalid_argument("default_gamma: feature count must be >= 1");
    return 1.0 / static_cast<double>(feature_count);
}

/// Rule-matching metric: squared Euclidean by default, kernel-induced squared
/// distance when a kernel is set.
struct Metric {
    std::optional<KernelSpec> kernel;

    double operator()(std::span<const double> a, std::span<const double> b) const {
        if (kernel) return kernel_distance_sq(*kernel, a, b);
        return squared_euclidean(a, b);
    }

    static Metric euclidean() { return {}; }
    static Metric rbf(double gamma) { return {KernelSpec{KernelKind::rbf, 2, gamma}}; }
};

/// Dense symmetric matrix of metric(points[i], points[j]).
template <typename Fn>
std::vector<std::vector<double>> pairwise_matrix(const std::vector<FeatureVector>& points, Fn&& metric) {
    if (points.empty()) throw std::invalid_argument("pairwise_matrix: no points");
    const std::size_t dim = points.front().size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("pairwise_matrix: ragged points");
    std::vector<std::vector<double>> m(points.size(), std::vector<double>(points.size(), 0.0));
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i; j < points.size(); ++j)
            m[i][j] = m[j][i] = metric(points[i], points[j]);
    return m;
}

} // namespace hh
