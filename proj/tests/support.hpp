#pragma once

// Independent oracles and random fixture generators shared by the unit tests
// and the acceptance binary. Nothing here calls into the code under test
// except for plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <mcccr/mcccr.hpp>

namespace oracle {

// Grows the radius in steps of eps, paying (1 + number of majority points
// already at or inside the radius) energy per step. The last step is
// finished fractionally; past the furthest point the radius stops there.
inline double step_expansion(std::vector<double> distances, double energy, double eps) {
    if (distances.empty()) return energy;
    std::sort(distances.begin(), distances.end());
    const double last = distances.back();
    double r = 0.0;
    double e = energy;
    std::size_t passed = 0;
    for (;;) {
        while (passed < distances.size() && distances[passed] <= r) ++passed;
        const double cost = 1.0 + static_cast<double>(passed);
        if (e - cost * eps <= 0.0) return std::min(r + e / cost, last);
        e -= cost * eps;
        r += eps;
        if (r >= last) return last;
    }
}

using Q = boost::multiprecision::cpp_rational;

inline Q frac(long long a, long long b) { return Q(a) / Q(b); }

using Table = std::vector<std::vector<long long>>;

inline long long row_total(const Table& t, std::size_t i) {
    long long s = 0;
    for (long long v : t[i]) s += v;
    return s;
}

inline long long col_total(const Table& t, std::size_t j) {
    long long s = 0;
    for (const auto& row : t) s += row[j];
    return s;
}

inline Q avacc(const Table& t) {
    Q s(0);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (row_total(t, i) > 0) s += frac(t[i][i], row_total(t, i));
    return s / Q(static_cast<long long>(t.size()));
}

inline Q cba(const Table& t) {
    Q s(0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const long long d = std::max(row_total(t, i), col_total(t, i));
        if (d > 0) s += frac(t[i][i], d);
    }
    return s / Q(static_cast<long long>(t.size()));
}

inline long double mgm(const Table& t) {
    long double prod = 1.0L;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const long long n = row_total(t, i);
        if (n == 0 || t[i][i] == 0) return 0.0L;
        prod *= static_cast<long double>(t[i][i]) / static_cast<long double>(n);
    }
    return std::pow(prod, 1.0L / static_cast<long double>(t.size()));
}

// Literal transcription: per-class probability tables P^i, class entropies
// and weights, all evaluated in long double from exact rationals.
inline long double cen(const Table& t) {
    const std::size_t m = t.size();
    long long total = 0;
    for (std::size_t i = 0; i < m; ++i) total += row_total(t, i);
    if (total == 0) return 0.0L;
    const long double base = std::log(2.0L * static_cast<long double>(m - 1));
    long double out = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
        const long long mass = row_total(t, i) + col_total(t, i);
        if (mass == 0) continue;
        long double h = 0.0L;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == i) continue;
            for (const Q& pr : {frac(t[i][k], mass), frac(t[k][i], mass)}) {
                if (pr == 0) continue;
                const long double v = pr.convert_to<long double>();
                h -= v * (std::log(v) / base);
            }
        }
        out += static_cast<long double>(mass) / (2.0L * static_cast<long double>(total)) * h;
    }
    return out;
}

inline double to_double(const Q& q) { return q.convert_to<double>(); }

}  // namespace oracle

namespace fixture {

inline mcccr::Matrix gaussian_cloud(mcccr::Rng& rng, std::size_t n, std::size_t m, double shift, double spread) {
    mcccr::Matrix out(0, m);
    std::vector<double> row(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) row[k] = (k == 0 ? shift : 0.0) + spread * rng.normal();
        out.append_row(row);
    }
    return out;
}

// Overlapping binary problem: minority shifted along the first axis.
inline mcccr::BinarySplit random_split(mcccr::Rng& rng, std::size_t m, std::size_t n_maj, std::size_t n_min) {
    return {gaussian_cloud(rng, n_maj, m, 0.0, 1.0), gaussian_cloud(rng, n_min, m, 1.0, 0.7)};
}

inline mcccr::LabeledDataset random_multiclass(mcccr::Rng& rng, const std::vector<std::size_t>& counts,
                                               std::size_t m) {
    mcccr::LabeledDataset ds;
    ds.features = mcccr::Matrix(0, m);
    std::vector<double> row(m);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        std::vector<double> centre(m);
        for (double& v : centre) v = 1.5 * rng.normal();
        for (std::size_t i = 0; i < counts[c]; ++i) {
            for (std::size_t k = 0; k < m; ++k) row[k] = centre[k] + rng.normal();
            ds.features.append_row(row);
            ds.labels.push_back(c);
        }
    }
    return ds;
}

inline mcccr::LabeledDataset with_labels(std::vector<mcccr::ClassId> labels, std::size_t m = 2) {
    mcccr::LabeledDataset ds;
    ds.features = mcccr::Matrix(labels.size(), m, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t k = 0; k < m; ++k) ds.features(i, k) = static_cast<double>(i * m + k);
    ds.labels = std::move(labels);
    return ds;
}

}  // namespace fixture
