#pragma once

// Multi-class imbalance metrics computed from a confusion matrix:
// average accuracy, class balance accuracy, multi-class G-mean and
// confusion entropy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace mcccr {

/// mat(i, j) counts instances of true class i predicted as class j.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t classes) : m_(classes), counts_(classes * classes, 0) {}

    static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
        ConfusionMatrix cm(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw Error("confusion matrix must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) cm.at(i, j) = rows[i][j];
        }
        return cm;
    }

    std::size_t classes() const noexcept { return m_; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return counts_[i * m_ + j]; }
    std::uint64_t& at(std::size_t i, std::size_t j) { return counts_[i * m_ + j]; }

    std::uint64_t row_sum(std::size_t i) const {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < m_; ++j) s += at(i, j);
        return s;
    }
    std::uint64_t col_sum(std::size_t j) const {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < m_; ++i) s += at(i, j);
        return s;
    }
    std::uint64_t total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t m_ = 0;
    std::vector<std::uint64_t> counts_;
};

inline ConfusionMatrix confusion_matrix(std::span<const ClassId> y_true, std::span<const ClassId> y_pred,
                                        std::size_t classes) {
    if (y_true.size() != y_pred.size()) {
        throw Error("label sequences differ in length: " + std::to_string(y_true.size()) + " vs " +
                    std::to_string(y_pred.size()));
    }
    ConfusionMatrix cm(classes);
    for (std::size_t k = 0; k < y_true.size(); ++k) {
        if (y_true[k] >= classes || y_pred[k] >= classes) {
            throw Error("label out of range at position " + std::to_string(k) + " (class count " +
                        std::to_string(classes) + ")");
        }
        ++cm.at(y_true[k], y_pred[k]);
    }
    return cm;
}

/// Per-class recall; a class without true instances counts as recall 0.
inline std::vector<double> recalls(const ConfusionMatrix& cm) {
    std::vector<double> r(cm.classes(), 0.0);
    for (std::size_t i = 0; i < cm.classes(); ++i) {
        const auto row = cm.row_sum(i);
        if (row > 0) r[i] = static_cast<double>(cm.at(i, i)) / static_cast<double>(row);
    }
    return r;
}

inline double avacc(const ConfusionMatrix& cm) {
    if (cm.classes() == 0) return 0.0;
    const auto r = recalls(cm);
    return std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(cm.classes());
}

inline double cba(const ConfusionMatrix& cm) {
    if (cm.classes() == 0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < cm.classes(); ++i) {
        const auto denom = std::max(cm.row_sum(i), cm.col_sum(i));
        if (denom > 0) s += static_cast<double>(cm.at(i, i)) / static_cast<double>(denom);
    }
    return s / static_cast<double>(cm.classes());
}

inline double mgm(const ConfusionMatrix& cm) {
    if (cm.classes() == 0) return 0.0;
    double log_sum = 0.0;
    for (double r : recalls(cm)) {
        if (!(r > 0.0)) return 0.0;
        log_sum += std::log(r);
    }
    return std::exp(log_sum / static_cast<double>(cm.classes()));
}

/// Confusion entropy with logarithm base 2(M-1); 0 log 0 is taken as 0 and
/// class weights are normalised by twice the total count.
inline double cen(const ConfusionMatrix& cm) {
    const std::size_t m = cm.classes();
    if (m < 2) throw Error("confusion entropy needs at least 2 classes, got " + std::to_string(m));
    const double total = static_cast<double>(cm.total());
    if (total == 0.0) return 0.0;
    const double log_base = std::log(2.0 * static_cast<double>(m - 1));
    auto plogp = [&](double v) { return v > 0.0 ? v * std::log(v) / log_base : 0.0; };

    double out = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double mass = static_cast<double>(cm.row_sum(i) + cm.col_sum(i));
        if (mass == 0.0) continue;
        double entropy = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            entropy -= plogp(static_cast<double>(cm.at(i, j)) / mass);
            entropy -= plogp(static_cast<double>(cm.at(j, i)) / mass);
        }
        out += mass / (2.0 * total) * entropy;
    }
    return out;
}

struct MetricReport {
    double avacc = 0.0;
    double cba = 0.0;
    double mgm = 0.0;
    double cen = 0.0;
    std::vector<std::string> warnings;
};

inline MetricReport evaluate(const ConfusionMatrix& cm) {
    MetricReport r;
    r.avacc = avacc(cm);
    r.cba = cba(cm);
    r.mgm = mgm(cm);
    r.cen = cm.classes() >= 2 ? cen(cm) : 0.0;
    for (std::size_t i = 0; i < cm.classes(); ++i) {
        if (cm.row_sum(i) == 0) {
            r.warnings.push_back("class " + std::to_string(i) + " has no true instances; scored as recall 0");
        }
    }
    return r;
}

enum class Metric { avacc, cba, mgm, cen };

inline std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::avacc: return "avacc";
        case Metric::cba: return "cba";
        case Metric::mgm: return "mgm";
        case Metric::cen: return "cen";
    }
    return "?";
}

inline Metric parse_metric(std::string_view s) {
    if (s == "avacc") return Metric::avacc;
    if (s == "cba") return Metric::cba;
    if (s == "mgm") return Metric::mgm;
    if (s == "cen") return Metric::cen;
    throw Error("unknown metric '" + std::string(s) + "' (expected avacc, cba, mgm or cen)");
}

constexpr bool higher_is_better(Metric m) { return m != Metric::cen; }

inline double metric_value(const MetricReport& r, Metric m) {
    switch (m) {
        case Metric::avacc: return r.avacc;
        case Metric::cba: return r.cba;
        case Metric::mgm: return r.mgm;
        case Metric::cen: return r.cen;
    }
    return 0.0;
}

/// Average rank of every method over datasets. scores[d][k] is method k on
/// dataset d; rank 1 is best and tied scores share the mean of their ranks.
inline std::vector<double> mean_ranks(const std::vector<std::vector<double>>& scores, bool higher_better) {
    if (scores.empty()) return {};
    const std::size_t k = scores.front().size();
    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> idx(k);
    for (const auto& row : scores) {
        if (row.size() != k) throw Error("score table is ragged");
        for (double v : row)
            if (std::isnan(v)) throw Error("score table contains NaN");
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return higher_better ? row[a] > row[b] : row[a] < row[b];
        });
        for (std::size_t s = 0; s < k;) {
            std::size_t e = s + 1;
            while (e < k && row[idx[e]] == row[idx[s]]) ++e;
            const double rank = (static_cast<double>(s + 1) + static_cast<double>(e)) / 2.0;
            for (std::size_t t = s; t < e; ++t) sum[idx[t]] += rank;
            s = e;
        }
    }
    for (double& v : sum) v /= static_cast<double>(scores.size());
    return sum;
}

}  // namespace mcccr
