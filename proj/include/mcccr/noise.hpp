#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace mcccr {

struct NoiseSpec {
    double level = 0.0;
    /// Only instances whose true label is listed are eligible; empty means all.
    std::vector<ClassId> affected_classes;
    std::uint64_t seed = 0;

    void validate(std::size_t classes) const {
        if (!(level >= 0.0 && level <= 1.0)) {
            throw Error("noise level must lie in [0, 1], got " + format_number(level));
        }
        for (ClassId c : affected_classes) {
            if (c >= classes) {
                throw Error("affected class " + std::to_string(c) + " out of range (class count " +
                            std::to_string(classes) + ")");
            }
        }
    }
};

struct NoisyDataset {
    LabeledDataset dataset;
    /// Flipped row indices, ascending.
    std::vector<std::size_t> flipped;
};

/// Replaces the labels of floor(level * |eligible|) uniformly chosen eligible
/// instances by a uniformly chosen different class.
inline NoisyDataset inject_noise(const LabeledDataset& dataset, const NoiseSpec& spec) {
    const std::size_t classes = dataset.class_count();
    if (classes < 2) throw Error("label noise needs at least 2 classes, got " + std::to_string(classes));
    spec.validate(classes);

    std::vector<std::size_t> eligible;
    if (spec.affected_classes.empty()) {
        eligible.resize(dataset.size());
        std::iota(eligible.begin(), eligible.end(), std::size_t{0});
    } else {
        const std::set<ClassId> pool(spec.affected_classes.begin(), spec.affected_classes.end());
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (pool.count(dataset.labels[i])) eligible.push_back(i);
    }

    NoisyDataset out{dataset, {}};
    const auto flips = static_cast<std::size_t>(std::floor(spec.level * static_cast<double>(eligible.size())));
    if (flips == 0) return out;

    Rng rng(spec.seed);
    for (std::size_t k : rng.sample_without_replacement(eligible.size(), flips)) {
        const std::size_t row = eligible[k];
        const ClassId old = dataset.labels[row];
        const ClassId draw = rng.index(classes - 1);
        out.dataset.labels[row] = draw < old ? draw : draw + 1;
        out.flipped.push_back(row);
    }
    return out;
}

}  // namespace mcccr
