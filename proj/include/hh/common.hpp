#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hh {

/// Problem-state descriptor: one real value per domain feature.
using FeatureVector = std::vector<double>;

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic RNG with explicit, implementation-independent draw rules.
/// All stochastic components consume a single stream in a defined order so
/// a fixed seed reproduces results bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::size_t next_below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    /// Standard normal via Box-Muller (two uniform draws per call).
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::uint64_t state_;
};

/// Splittable child-seed derivation: independent streams per (tag, index)
/// cell, so adding experiment cells never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
    std::uint64_t z = master ^ (tag * 0x9e3779b97f4a7c15ULL) ^ (index * 0xc2b2ae3d27d4eb4fULL);
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
}

} // namespace hh
