#pragma once

// Multi-class decomposition: classes are processed from largest to smallest,
// each one oversampled against a combined majority drawn from the classes
// already processed. Cleaned positions and synthetic rows are written back
// before the next class is considered.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "core.hpp"
#include "dataset.hpp"
#include "random.hpp"

namespace mcccr {

struct McConfig : CleaningConfig {
    Decomposition decomposition = Decomposition::sampling;
};

struct ClassOrdering {
    std::vector<ClassId> order;
};

/// Classes by descending count; equal counts keep ascending class id.
inline ClassOrdering order_classes(const LabeledDataset& dataset) {
    const auto counts = dataset.class_counts();
    ClassOrdering out;
    out.order.resize(counts.size());
    std::iota(out.order.begin(), out.order.end(), ClassId{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](ClassId a, ClassId b) { return counts[a] > counts[b]; });
    return out;
}

struct CombinedMajority {
    Matrix features;
    /// Row of the dataset each combined-majority observation was taken from.
    std::vector<std::size_t> source_rows;
};

/// Pseudo-majority for `target_class`: every class preceding it in the
/// ordering contributes either floor(|largest| / n_preceding) observations
/// sampled without replacement (capped at the class's current size) or, for
/// the complete decomposition, all of its observations.
inline CombinedMajority build_combined_majority(const LabeledDataset& dataset, ClassId target_class,
                                                const ClassOrdering& ordering, Decomposition method,
                                                Rng& rng) {
    const auto pos = std::find(ordering.order.begin(), ordering.order.end(), target_class);
    if (pos == ordering.order.end()) {
        throw Error("class " + std::to_string(target_class) + " is not part of the ordering");
    }
    const auto n_classes = static_cast<std::size_t>(pos - ordering.order.begin());
    CombinedMajority out;
    out.features = Matrix(0, dataset.dims());
    if (n_classes == 0) return out;

    std::vector<std::vector<std::size_t>> members(dataset.class_count());
    for (std::size_t i = 0; i < dataset.size(); ++i) members[dataset.labels[i]].push_back(i);

    const std::size_t largest = members[ordering.order.front()].size();
    const std::size_t quota = largest / n_classes;
    for (std::size_t j = 0; j < n_classes; ++j) {
        const auto& rows = members[ordering.order[j]];
        if (method == Decomposition::complete || quota >= rows.size()) {
            out.source_rows.insert(out.source_rows.end(), rows.begin(), rows.end());
        } else {
            for (std::size_t k : rng.sample_without_replacement(rows.size(), quota)) {
                out.source_rows.push_back(rows[k]);
            }
        }
    }
    out.features = dataset.features.select_rows(out.source_rows);
    return out;
}

/// Seed of the binary stage for the k-th oversampled class. The first stage
/// uses the master seed so two-class problems reduce exactly to binary_ccr.
inline std::uint64_t stage_seed(std::uint64_t master, std::size_t stage) {
    return stage == 0 ? master : derive_seed(master, {0x53544147ULL, stage});
}

inline ResampledDataset mc_ccr(const LabeledDataset& dataset, const McConfig& config) {
    dataset.validate();
    config.validate();
    if (dataset.nonempty_classes() < 2) {
        throw Error("resampling needs at least two non-empty classes, got " +
                    std::to_string(dataset.nonempty_classes()));
    }
    const auto ordering = order_classes(dataset);
    Rng sampler(derive_seed(config.seed, {0x53414d50ULL}));

    LabeledDataset work = dataset;
    std::vector<std::int64_t> origin(dataset.size());
    std::iota(origin.begin(), origin.end(), std::int64_t{0});

    std::size_t stage = 0;
    for (std::size_t pos = 1; pos < ordering.order.size(); ++pos) {
        const ClassId c = ordering.order[pos];
        const auto minority_rows = work.indices_of(c);
        if (minority_rows.empty()) continue;

        auto combined = build_combined_majority(work, c, ordering, config.decomposition, sampler);
        BinarySplit split{std::move(combined.features), work.features.select_rows(minority_rows)};
        CleaningConfig stage_config = config;
        stage_config.seed = stage_seed(config.seed, stage++);
        auto result = binary_ccr(split, stage_config);

        switch (config.cleaning) {
            case CleaningStrategy::translation:
                for (std::size_t t = 0; t < combined.source_rows.size(); ++t) {
                    const auto src = result.cleaned_majority.row(t);
                    std::copy(src.begin(), src.end(), work.features.row(combined.source_rows[t]).begin());
                }
                break;
            case CleaningStrategy::removal: {
                std::vector<char> drop(work.size(), 0);
                for (std::size_t s : combined.source_rows) drop[s] = 1;
                for (std::size_t t : result.kept) drop[combined.source_rows[t]] = 0;
                LabeledDataset next;
                next.features = Matrix(0, work.dims());
                next.class_names = work.class_names;
                next.feature_names = work.feature_names;
                next.relation = work.relation;
                std::vector<std::int64_t> next_origin;
                for (std::size_t i = 0; i < work.size(); ++i) {
                    if (drop[i]) continue;
                    next.features.append_row(work.features.row(i));
                    next.labels.push_back(work.labels[i]);
                    next_origin.push_back(origin[i]);
                }
                work = std::move(next);
                origin = std::move(next_origin);
                break;
            }
            case CleaningStrategy::ignoring:
                break;
        }

        for (std::size_t s = 0; s < result.synthetic.rows(); ++s) {
            work.features.append_row(result.synthetic.row(s));
            work.labels.push_back(c);
            origin.push_back(-1);
        }
    }
    return {std::move(work), std::move(origin), {}};
}

}  // namespace mcccr
