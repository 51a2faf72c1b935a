#pragma once

// Synthetic benchmark data: Gaussian mixtures with prescribed class counts,
// used for shape-matched desk benchmarks and scaling measurements.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace mcccr {

struct BlobShape {
    std::string name;
    std::vector<std::size_t> counts;
    std::size_t dims = 2;
    /// Spread of class centres relative to the unit within-cluster deviation.
    double separation = 2.0;
    /// Gaussian sub-clusters per class.
    std::size_t clusters_per_class = 2;
};

inline LabeledDataset make_blobs(const BlobShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.relation = shape.name.empty() ? "blobs" : shape.name;
    ds.features = Matrix(0, shape.dims);
    const std::size_t clusters = std::max<std::size_t>(1, shape.clusters_per_class);
    std::vector<FeatureVector> centres;
    for (std::size_t c = 0; c < shape.counts.size(); ++c) {
        ds.class_names.push_back("c" + std::to_string(c));
        FeatureVector class_centre(shape.dims);
        for (double& v : class_centre) v = shape.separation * rng.normal();
        centres.clear();
        for (std::size_t s = 0; s < clusters; ++s) {
            FeatureVector centre = class_centre;
            for (double& v : centre) v += 0.5 * shape.separation * rng.normal();
            centres.push_back(std::move(centre));
        }
        FeatureVector row(shape.dims);
        for (std::size_t i = 0; i < shape.counts[c]; ++i) {
            const auto& centre = centres[i % clusters];
            for (std::size_t k = 0; k < shape.dims; ++k) row[k] = centre[k] + rng.normal();
            ds.features.append_row(row);
            ds.labels.push_back(c);
        }
    }
    for (std::size_t k = 0; k < shape.dims; ++k) ds.feature_names.push_back("x" + std::to_string(k + 1));
    return ds;
}

}  // namespace mcccr
