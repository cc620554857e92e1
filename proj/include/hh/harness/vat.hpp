#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hh/common.hpp"
#include "hh/kernel.hpp"

namespace hh::harness {

/// Group-sorted pairwise-distance matrix (group order, stable within groups).
template <typename Fn>
std::vector<std::vector<double>> vat_matrix(const std::vector<FeatureVector>& points,
                                            const std::vector<int>& groups, Fn&& metric) {
    if (points.size() < 2) throw std::invalid_argument("vat_matrix: need at least 2 points");
    if (groups.size() != points.size())
        throw std::invalid_argument("vat_matrix: group labels must match points");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return groups[a] < groups[b]; });
    std::vector<FeatureVector> sorted;
    for (std::size_t i : order) sorted.push_back(points[i]);
    return pairwise_matrix(sorted, metric);
}

inline std::string matrix_csv(const std::vector<std::vector<double>>& m) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& row : m) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << "\n";
    }
    return out.str();
}

/// 8-bit binary PGM of a distance matrix; darker pixels mean more similar
/// (similarity normalized from the distance range).
inline void write_pgm(const std::vector<std::vector<double>>& distances, const std::string& path) {
    double dmax = 0.0;
    for (const auto& row : distances)
        for (double d : row) dmax = std::max(dmax, d);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << distances.size() << " " << distances.size() << "\n255\n";
    for (const auto& row : distances)
        for (double d : row) {
            double sim = dmax > 0.0 ? 1.0 - d / dmax : 1.0;
            auto px = static_cast<unsigned char>(std::lround(255.0 * (1.0 - sim)));
            out.put(static_cast<char>(px));
        }
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

/// Group-sorted VAT rendering: PGM image plus a CSV of the raw matrix.
template <typename Fn>
void emit_vat(const std::vector<FeatureVector>& points, const std::vector<int>& groups, Fn&& metric,
              const std::string& path_prefix) {
    auto m = vat_matrix(points, groups, metric);
    write_pgm(m, path_prefix + ".pgm");
    std::ofstream csv(path_prefix + ".csv");
    if (!csv) throw std::runtime_error("emit_vat: cannot open " + path_prefix + ".csv");
    csv << matrix_csv(m);
}

} // namespace hh::harness
