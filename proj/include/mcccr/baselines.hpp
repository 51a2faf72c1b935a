#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "core.hpp"
#include "dataset.hpp"
#include "random.hpp"

namespace mcccr {

/// Indices of the k nearest other rows of `points` for every row, ordered by
/// (distance, index).
inline std::vector<std::vector<std::size_t>> within_set_neighbors(const Matrix& points, std::size_t k,
                                                                  double p) {
    const std::size_t n = points.rows();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t i = 0; i < n; ++i) {
        keyed.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) keyed.emplace_back(pnorm_distance(points.row(i), points.row(j), p), j);
        }
        const std::size_t take = std::min(k, keyed.size());
        std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end());
        out[i].reserve(take);
        for (std::size_t t = 0; t < take; ++t) out[i].push_back(keyed[t].second);
    }
    return out;
}

/// SMOTE: each synthetic point interpolates a uniformly chosen seed toward one
/// of its k nearest minority neighbours.
inline Matrix smote(const Matrix& minority, std::size_t k, std::size_t count, Rng& rng, double p = 2.0) {
    if (minority.rows() < 2) {
        throw Error("SMOTE needs at least 2 minority observations, got " + std::to_string(minority.rows()));
    }
    if (k < 1) throw Error("SMOTE neighbour count must be >= 1");
    const std::size_t m = minority.cols();
    Matrix out(0, m);
    if (count == 0) return out;
    const auto neighbors = within_set_neighbors(minority, std::min(k, minority.rows() - 1), p);
    out.reserve_rows(count);
    FeatureVector point(m);
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t seed = rng.index(minority.rows());
        const auto& nn = neighbors[seed];
        const std::size_t other = nn[rng.index(nn.size())];
        const double u = rng.uniform_open();
        const auto x = minority.row(seed);
        const auto y = minority.row(other);
        for (std::size_t d = 0; d < m; ++d) point[d] = x[d] + u * (y[d] - x[d]);
        out.append_row(point);
    }
    return out;
}

/// Round-robin SMOTE: every non-largest class is oversampled independently
/// towards the largest class count. Singleton classes are skipped.
inline ResampledDataset smote_all(const LabeledDataset& dataset, std::size_t k, OversamplingRatio ratio,
                                  std::uint64_t seed, double p = 2.0) {
    dataset.validate();
    ResampledDataset out{dataset, {}, {}};
    out.origin.resize(dataset.size());
    std::iota(out.origin.begin(), out.origin.end(), std::int64_t{0});
    const auto counts = dataset.class_counts();
    if (counts.empty()) return out;
    const std::size_t n_maj = *std::max_element(counts.begin(), counts.end());
    for (ClassId c = 0; c < counts.size(); ++c) {
        const std::size_t target = ratio.target(n_maj, counts[c]);
        if (target == 0) continue;
        if (counts[c] < 2) {
            out.warnings.push_back("smote-all: class " + std::to_string(c) + " has " +
                                   std::to_string(counts[c]) + " instance(s); skipped");
            continue;
        }
        const auto rows = dataset.indices_of(c);
        Rng rng(derive_seed(seed, {0x534d4f54ULL, c}));
        const Matrix synthetic = smote(dataset.features.select_rows(rows), k, target, rng, p);
        for (std::size_t s = 0; s < synthetic.rows(); ++s) {
            out.dataset.features.append_row(synthetic.row(s));
            out.dataset.labels.push_back(c);
            out.origin.push_back(-1);
        }
    }
    return out;
}

}  // namespace mcccr
