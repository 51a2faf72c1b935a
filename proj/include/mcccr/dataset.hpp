#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matrix.hpp"

namespace mcccr {

using ClassId = std::size_t;

/// Feature matrix plus integer class labels drawn from [0, class_count()).
struct LabeledDataset {
    Matrix features;
    std::vector<ClassId> labels;
    /// Original label strings indexed by class id; may be empty.
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    std::string relation;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dims() const noexcept { return features.cols(); }

    std::size_t class_count() const {
        std::size_t m = class_names.size();
        for (ClassId y : labels) m = std::max(m, y + 1);
        return m;
    }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(class_count(), 0);
        for (ClassId y : labels) ++counts[y];
        return counts;
    }

    std::size_t nonempty_classes() const {
        const auto counts = class_counts();
        return static_cast<std::size_t>(
            std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
    }

    std::vector<std::size_t> indices_of(ClassId c) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) out.push_back(i);
        return out;
    }

    LabeledDataset subset(std::span<const std::size_t> idx) const {
        LabeledDataset out;
        out.features = features.select_rows(idx);
        out.labels.reserve(idx.size());
        for (std::size_t i : idx) out.labels.push_back(labels[i]);
        out.class_names = class_names;
        out.feature_names = feature_names;
        out.relation = relation;
        return out;
    }

    void validate() const {
        if (features.rows() != labels.size()) {
            throw Error("feature rows (" + std::to_string(features.rows()) +
                        ") and labels (" + std::to_string(labels.size()) + ") differ in length");
        }
        for (double v : features.data()) {
            if (!std::isfinite(v)) throw Error("dataset contains a non-finite feature value");
        }
    }
};

/// Resampler output: the dataset plus, per row, the index of the input row it
/// came from, or -1 for a synthetic row.
struct ResampledDataset {
    LabeledDataset dataset;
    std::vector<std::int64_t> origin;
    std::vector<std::string> warnings;

    std::size_t synthetic_count() const {
        return static_cast<std::size_t>(std::count(origin.begin(), origin.end(), std::int64_t{-1}));
    }
    std::vector<std::size_t> synthetic_rows() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < origin.size(); ++i)
            if (origin[i] < 0) out.push_back(i);
        return out;
    }
};

enum class CleaningStrategy { translation, removal, ignoring };
enum class SelectionStrategy { proportional, random };
enum class Decomposition { sampling, complete };

/// Oversampling target: either "balance" (raise the minority to the majority
/// count) or an explicit percentage of the minority size.
struct OversamplingRatio {
    bool balance = true;
    double percent = 0.0;

    static OversamplingRatio balanced() { return {}; }
    static OversamplingRatio of_percent(double r) { return {false, r}; }

    /// Number of instances to generate for a class of n_min instances facing
    /// n_maj majority instances. Never negative, never overshoots n_maj.
    std::size_t target(std::size_t n_maj, std::size_t n_min) const {
        if (n_maj <= n_min) return 0;
        const std::size_t gap = n_maj - n_min;
        if (balance) return gap;
        const double want = std::floor(percent / 100.0 * static_cast<double>(n_min));
        if (!(want > 0.0)) return 0;
        return std::min(gap, static_cast<std::size_t>(want));
    }

    std::string to_string() const;
    friend bool operator==(const OversamplingRatio&, const OversamplingRatio&) = default;
};

inline std::string format_number(double v) {
    char buf[32];
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        char tmp[32];
        std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
        if (std::strtod(tmp, nullptr) == v) return tmp;
    }
    return buf;
}

inline std::string OversamplingRatio::to_string() const {
    return balance ? std::string("balance") : format_number(percent);
}

inline OversamplingRatio parse_ratio(std::string_view s) {
    if (s == "balance") return OversamplingRatio::balanced();
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str() || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
        throw Error("invalid oversampling ratio '" + tmp + "' (expected 'balance' or a positive number)");
    }
    return OversamplingRatio::of_percent(v);
}

inline std::string_view to_string(CleaningStrategy s) {
    switch (s) {
        case CleaningStrategy::translation: return "translation";
        case CleaningStrategy::removal: return "removal";
        case CleaningStrategy::ignoring: return "ignoring";
    }
    return "?";
}
inline std::string_view to_string(SelectionStrategy s) {
    return s == SelectionStrategy::proportional ? "proportional" : "random";
}
inline std::string_view to_string(Decomposition d) {
    return d == Decomposition::sampling ? "sampling" : "complete";
}

inline CleaningStrategy parse_cleaning(std::string_view s) {
    if (s == "translation" || s == "T") return CleaningStrategy::translation;
    if (s == "removal" || s == "R") return CleaningStrategy::removal;
    if (s == "ignoring" || s == "I") return CleaningStrategy::ignoring;
    throw Error("unknown cleaning strategy '" + std::string(s) + "'");
}
inline SelectionStrategy parse_selection(std::string_view s) {
    if (s == "proportional" || s == "P") return SelectionStrategy::proportional;
    if (s == "random" || s == "R") return SelectionStrategy::random;
    throw Error("unknown selection strategy '" + std::string(s) + "'");
}
inline Decomposition parse_decomposition(std::string_view s) {
    if (s == "sampling" || s == "S") return Decomposition::sampling;
    if (s == "complete" || s == "C") return Decomposition::complete;
    throw Error("unknown decomposition '" + std::string(s) + "'");
}

}  // namespace mcccr
