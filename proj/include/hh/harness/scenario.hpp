#pragma once

#include <string>
#include <vector>

#include "hh/common.hpp"
#include "hh/kernel.hpp"
#include "hh/transforms.hpp"

namespace hh::harness {

/// Experiment scenarios: original feature space (O), explicit transforms
/// (L/E/S), kernel distance (K), and kernel combined with a fitted explicit
/// transform (K+L, K+S).
enum class Scenario { original, linear, exponential, s_shaped, kernel, kernel_linear, kernel_s_shaped };

inline std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::original: return "O";
    case Scenario::linear: return "L";
    case Scenario::exponential: return "E";
    case Scenario::s_shaped: return "S";
    case Scenario::kernel: return "K";
    case Scenario::kernel_linear: return "K+L";
    case Scenario::kernel_s_shaped: return "K+S";
    }
    return "O";
}

inline Scenario scenario_from_string(const std::string& s) {
    if (s == "O") return Scenario::original;
    if (s == "L") return Scenario::linear;
    if (s == "E") return Scenario::exponential;
    if (s == "S") return Scenario::s_shaped;
    if (s == "K") return Scenario::kernel;
    if (s == "K+L") return Scenario::kernel_linear;
    if (s == "K+S") return Scenario::kernel_s_shaped;
    throw std::invalid_argument("unknown scenario id: " + s);
}

struct ScenarioPipeline {
    TransformSpec transform;
    Metric metric;
};

/// Transform and metric for a scenario: explicit transforms are fitted on
/// the training feature matrix; kernel scenarios use rbf with gamma = 1/N_f.
inline ScenarioPipeline build_scenario(Scenario id, const std::vector<FeatureVector>& training_features,
                                       std::size_t feature_count) {
    ScenarioPipeline p;
    p.metric = Metric::euclidean();
    switch (id) {
    case Scenario::original: break;
    case Scenario::exponential: p.transform.kind = TransformKind::exponential; break;
    case Scenario::linear: p.transform = make_transform(TransformKind::linear, training_features); break;
    case Scenario::s_shaped: p.transform = make_transform(TransformKind::s_shaped, training_features); break;
    case Scenario::kernel:
        p.metric = Metric::rbf(default_gamma(static_cast<int>(feature_count)));
        break;
    case Scenario::kernel_linear:
        p.transform = make_transform(TransformKind::linear, training_features);
        p.metric = Metric::rbf(default_gamma(static_cast<int>(feature_count)));
        break;
    case Scenario::kernel_s_shaped:
        p.transform = make_transform(TransformKind::s_shaped, training_features);
        p.metric = Metric::rbf(default_gamma(static_cast<int>(feature_count)));
        break;
    }
    return p;
}

/// Seeded train/test split: uniform sample without replacement for training,
/// remainder for testing; disjoint and exhaustive. The training count is
/// fraction * n rounded half up.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_instances(std::size_t count, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split_instances: fraction must be in (0,1)");
    auto train_count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(count) + 0.5));
    if (train_count < 1 || train_count >= count)
        throw std::invalid_argument("split_instances: too few instances for the requested fraction");
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = count - 1; i > 0; --i)
        std::swap(idx[i], idx[rng.next_below(i + 1)]);
    std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_count));
    std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(train_count), idx.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

} // namespace hh::harness
