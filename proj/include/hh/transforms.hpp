#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "hh/common.hpp"

namespace hh {

enum class TransformKind { identity, linear, s_shaped, exponential };

inline std::string to_string(TransformKind k) {
    switch (k) {
    case TransformKind::identity: return "identity";
    case TransformKind::linear: return "linear";
    case TransformKind::s_shaped: return "s_shaped";
    case TransformKind::exponential: return "exponential";
    }
    return "identity";
}

inline TransformKind transform_kind_from_string(const std::string& s) {
    if (s == "identity") return TransformKind::identity;
    if (s == "linear") return TransformKind::linear;
    if (s == "s_shaped") return TransformKind::s_shaped;
    if (s == "exponential") return TransformKind::exponential;
    throw std::invalid_argument("unknown transform kind: " + s);
}

/// Per-feature bound parameters: midpoint and half-width of the training range.
struct FeatureBounds {
    double midpoint = 0.0;
    double half_width = 0.0;
};

/// Feature remapping applied elementwise before rule matching.
/// linear/s_shaped use fitted per-feature bounds; exponential uses a fixed
/// steepness on raw values; identity passes features through untouched.
struct TransformSpec {
    TransformKind kind = TransformKind::identity;
    std::vector<FeatureBounds> params; // one per feature, linear/s_shaped only
    double steepness = 5.0;            // exponential only
};

/// Per-column (midpoint, half-width) fit from a training feature matrix.
inline std::vector<FeatureBounds> fit_bounds(const std::vector<FeatureVector>& rows) {
    if (rows.empty()) throw std::invalid_argument("fit_bounds: empty training matrix");
    const std::size_t cols = rows.front().size();
    std::vector<FeatureBounds> out(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double lo = rows.front().at(j), hi = lo;
        for (const auto& row : rows) {
            if (row.size() != cols) throw std::invalid_argument("fit_bounds: ragged matrix");
            if (!std::isfinite(row[j])) throw std::invalid_argument("fit_bounds: non-finite value");
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        out[j] = {(hi + lo) / 2.0, (hi - lo) / 2.0};
    }
    return out;
}

/// Clamped linear remap of [M-W, M+W] onto [0, 1].
inline double apply_linear(double x, double midpoint, double half_width) {
    if (half_width < 0.0) throw std::invalid_argument("apply_linear: negative half-width");
    if (half_width == 0.0) return 0.5; // constant training feature stays inert
    double y = (x - midpoint + half_width) / (2.0 * half_width);
    return std::max(0.0, std::min(1.0, y));
}

/// Logistic remap centred on the midpoint; the training range endpoints land
/// at exponent +-6.
inline double apply_s_shaped(double x, double midpoint, double half_width) {
    if (half_width < 0.0) throw std::invalid_argument("apply_s_shaped: negative half-width");
    if (half_width == 0.0) return 0.5;
    return 1.0 - 1.0 / (1.0 + std::exp(6.0 * (x - midpoint) / half_width));
}

/// Fixed exponential remap on raw feature values, no fitting.
inline double apply_exponential(double x, double steepness = 5.0) {
    double ekx = std::exp(-steepness * x);
    return 1.0 - 2.0 * (ekx - std::exp(-steepness)) / (1.0 + ekx);
}

inline FeatureVector apply_spec(const TransformSpec& spec, const FeatureVector& v) {
    switch (spec.kind) {
    case TransformKind::identity: return v;
    case TransformKind::exponential: {
        FeatureVector out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = apply_exponential(v[i], spec.steepness);
        return out;
    }
    case TransformKind::linear:
    case TransformKind::s_shaped: {
        if (spec.params.size() != v.size())
            throw std::invalid_argument("apply_spec: params/feature length mismatch");
        FeatureVector out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& b = spec.params[i];
            out[i] = spec.kind == TransformKind::linear
                         ? apply_linear(v[i], b.midpoint, b.half_width)
                         : apply_s_shaped(v[i], b.midpoint, b.half_width);
        }
        return out;
    }
    }
    return v;
}

/// Convenience: a spec of the given kind fitted on training rows when needed.
inline TransformSpec make_transform(TransformKind kind, const std::vector<FeatureVector>& training_rows) {
    TransformSpec spec;
    spec.kind = kind;
    if (kind == TransformKind::linear || kind == TransformKind::s_shaped)
        spec.params = fit_bounds(training_rows);
    return spec;
}

inline void to_json(nlohmann::json& j, const TransformSpec& s) {
    j = nlohmann::json{{"kind", to_string(s.kind)}, {"K", s.steepness}};
    auto& p = j["params"] = nlohmann::json::array();
    for (const auto& b : s.params) p.push_back({b.midpoint, b.half_width});
}

inline void from_json(const nlohmann::json& j, TransformSpec& s) {
    s.kind = transform_kind_from_string(j.at("kind").get<std::string>());
    s.steepness = j.value("K", 5.0);
    s.params.clear();
    if (j.contains("params"))
        for (const auto& pair : j.at("params"))
            s.params.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
}

} // namespace hh
