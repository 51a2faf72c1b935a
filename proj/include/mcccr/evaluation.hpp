#pragma once

// Evaluation building blocks: stratified folds, train-only standardisation
// and the reference k-NN classifier.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "core.hpp"
#include "dataset.hpp"
#include "random.hpp"

namespace mcccr {

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct FoldPlan {
    std::vector<Fold> folds;
    std::vector<std::string> warnings;
};

/// k stratified folds. Each class is shuffled and dealt round-robin; the deal
/// continues where the previous class stopped so fold sizes stay within one
/// of each other.
inline FoldPlan stratified_folds(std::span<const ClassId> labels, std::size_t k, Rng& rng) {
    if (k < 2) throw Error("fold count must be >= 2, got " + std::to_string(k));
    FoldPlan plan;
    std::map<ClassId, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::vector<std::vector<std::size_t>> test(k);
    std::size_t cursor = 0;
    for (auto& [c, rows] : by_class) {
        if (rows.size() < k) {
            plan.warnings.push_back("class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                                    " instances, fewer than " + std::to_string(k) + " folds");
        }
        rng.shuffle(std::span<std::size_t>(rows));
        for (std::size_t r : rows) {
            test[cursor].push_back(r);
            cursor = (cursor + 1) % k;
        }
    }
    plan.folds.resize(k);
    std::vector<std::size_t> fold_of(labels.size());
    for (std::size_t f = 0; f < k; ++f) {
        std::sort(test[f].begin(), test[f].end());
        for (std::size_t r : test[f]) fold_of[r] = f;
        plan.folds[f].test = test[f];
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t f = 0; f < k; ++f)
            if (fold_of[i] != f) plan.folds[f].train.push_back(i);
    }
    return plan;
}

/// Per-feature standardisation fitted on one sample and applied to others.
class Standardizer {
public:
    void fit(const Matrix& x) {
        const std::size_t m = x.cols();
        mean_.assign(m, 0.0);
        scale_.assign(m, 1.0);
        if (x.rows() == 0) return;
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t k = 0; k < m; ++k) mean_[k] += x(i, k);
        for (double& v : mean_) v /= static_cast<double>(x.rows());
        std::vector<double> var(m, 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const double d = x(i, k) - mean_[k];
                var[k] += d * d;
            }
        for (std::size_t k = 0; k < m; ++k) {
            const double sd = std::sqrt(var[k] / static_cast<double>(x.rows()));
            scale_[k] = sd > 0.0 ? sd : 1.0;
        }
    }

    Matrix transform(const Matrix& x) const {
        Matrix out = x;
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t k = 0; k < out.cols(); ++k) out(i, k) = (out(i, k) - mean_[k]) / scale_[k];
        return out;
    }

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& scale() const { return scale_; }

private:
    std::vector<double> mean_;
    std::vector<double> scale_;
};

struct Neighbor {
    double distance;
    std::size_t index;
    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    }
};

/// The `k` nearest training rows of every query row, nearest first.
inline std::vector<std::vector<Neighbor>> nearest_neighbors(const Matrix& train, const Matrix& queries,
                                                            std::size_t k, double p) {
    std::vector<std::vector<Neighbor>> out(queries.rows());
    const std::size_t take = std::min(k, train.rows());
    std::vector<Neighbor> all(train.rows());
    for (std::size_t q = 0; q < queries.rows(); ++q) {
        for (std::size_t j = 0; j < train.rows(); ++j) all[j] = {pnorm_distance(queries.row(q), train.row(j), p), j};
        std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end());
        out[q].assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return out;
}

/// Majority vote among the first k neighbours. Vote ties go to the class
/// whose tied neighbours are nearer on average, then to the lower class id.
inline ClassId vote(std::span<const Neighbor> neighbors, std::span<const ClassId> train_labels, std::size_t k) {
    std::map<ClassId, std::pair<std::size_t, double>> tally;
    const std::size_t take = std::min(k, neighbors.size());
    for (std::size_t t = 0; t < take; ++t) {
        auto& [votes, dist] = tally[train_labels[neighbors[t].index]];
        ++votes;
        dist += neighbors[t].distance;
    }
    ClassId best = 0;
    std::size_t best_votes = 0;
    double best_mean = 0.0;
    for (const auto& [c, entry] : tally) {
        const double mean = entry.second / static_cast<double>(entry.first);
        if (entry.first > best_votes || (entry.first == best_votes && mean < best_mean)) {
            best = c;
            best_votes = entry.first;
            best_mean = mean;
        }
    }
    return best;
}

inline std::vector<ClassId> knn_classify(const LabeledDataset& train, const Matrix& test_features, std::size_t k,
                                         double p = 2.0) {
    if (train.size() == 0) throw Error("k-NN needs a non-empty training set");
    if (k < 1) throw Error("k-NN neighbour count must be >= 1");
    const auto nn = nearest_neighbors(train.features, test_features, k, p);
    std::vector<ClassId> out(test_features.rows());
    for (std::size_t q = 0; q < nn.size(); ++q) out[q] = vote(nn[q], train.labels, k);
    return out;
}

}  // namespace mcccr
