#pragma once

// Binary combined cleaning and resampling: energy-bounded spheres around each
// minority observation, majority cleaning inside the spheres, and synthetic
// generation weighted by inverse sphere radius.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"
#include "random.hpp"

namespace mcccr {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// Radii below this are treated as coincident points when translating.
inline constexpr double kCoincidentDistance = 1e-12;

/// Relative floor applied to radii before inversion in the generation counts.
inline constexpr double kRadiusFloorFactor = 1e-6;

struct CleaningConfig {
    double energy = 0.25;
    double p = 2.0;
    CleaningStrategy cleaning = CleaningStrategy::translation;
    SelectionStrategy selection = SelectionStrategy::proportional;
    OversamplingRatio ratio = OversamplingRatio::balanced();
    std::uint64_t seed = 0;

    void validate() const {
        if (!(energy > 0.0) || !std::isfinite(energy)) {
            throw Error("energy must be a positive finite number, got " + format_number(energy));
        }
        if (!(p >= 1.0)) throw Error("p-norm order must be >= 1, got " + format_number(p));
        if (!ratio.balance && !(ratio.percent > 0.0)) {
            throw Error("oversampling ratio must be positive, got " + format_number(ratio.percent));
        }
    }
};

struct BinarySplit {
    Matrix majority;
    Matrix minority;

    void validate() const {
        if (minority.rows() == 0) throw Error("binary split needs at least one minority observation");
        if (majority.rows() > 0 && majority.cols() != minority.cols()) {
            throw Error("majority has " + std::to_string(majority.cols()) +
                        " features but minority has " + std::to_string(minority.cols()));
        }
    }
};

struct SphereSet {
    std::vector<double> radii;
};

inline void check_norm_order(double p) {
    if (!(p >= 1.0)) throw Error("p-norm order must be >= 1, got " + format_number(p));
}

inline double pnorm(std::span<const double> v, double p) {
    if (p == 2.0) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s;
    }
    if (std::isinf(p)) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    }
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s, 1.0 / p);
}

/// Minkowski distance ||a - b||_p.
inline double pnorm_distance(std::span<const double> a, std::span<const double> b, double p) {
    if (a.size() != b.size()) {
        throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
    }
    check_norm_order(p);
    const std::size_t m = a.size();
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = a[k] - b[k];
            s += d * d;
        }
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += std::abs(a[k] - b[k]);
        return s;
    }
    if (std::isinf(p)) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s = std::max(s, std::abs(a[k] - b[k]));
        return s;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += std::pow(std::abs(a[k] - b[k]), p);
    return std::pow(s, 1.0 / p);
}

struct SphereExpansion {
    double radius = 0.0;
    /// Distances to the majority observations in ascending order.
    std::vector<double> sorted_distances;
    /// Majority row index for each entry of sorted_distances.
    std::vector<std::size_t> order;
    double energy_spent = 0.0;
};

/// The expansion loop over distances already sorted ascending. Crossing from
/// the (j-1)-th to the j-th distance costs j energy per unit of radius; when
/// the budget cannot reach the next distance the remainder is converted into
/// radius at the current unit cost. Budget left after the last majority
/// observation is discarded. With no majority observations the radius equals
/// the energy.
inline std::pair<double, double> expand_over_sorted(std::span<const double> sorted, double energy) {
    if (sorted.empty()) return {energy, energy};
    double radius = 0.0;
    double remaining = energy;
    std::size_t inside = 0;
    for (double d : sorted) {
        ++inside;
        const double delta = -(d - radius) * static_cast<double>(inside);
        if (remaining + delta > 0.0) {
            radius = d;
            remaining += delta;
        } else {
            radius += remaining / static_cast<double>(inside);
            remaining = 0.0;
            break;
        }
    }
    return {radius, energy - remaining};
}

inline SphereExpansion expand_sphere(std::span<const double> center, const Matrix& majority,
                                     double energy, double p) {
    if (!(energy > 0.0)) throw Error("energy must be positive, got " + format_number(energy));
    check_norm_order(p);
    if (majority.rows() > 0 && majority.cols() != center.size()) {
        throw Error("dimension mismatch: center has " + std::to_string(center.size()) +
                    " features, majority has " + std::to_string(majority.cols()));
    }
    const std::size_t n = majority.rows();
    std::vector<std::pair<double, std::size_t>> keyed(n);
    for (std::size_t j = 0; j < n; ++j) keyed[j] = {pnorm_distance(center, majority.row(j), p), j};
    // (distance, index) keeps ties stable
    std::sort(keyed.begin(), keyed.end());

    SphereExpansion out;
    out.sorted_distances.resize(n);
    out.order.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.sorted_distances[j] = keyed[j].first;
        out.order[j] = keyed[j].second;
    }
    const auto [radius, spent] = expand_over_sorted(out.sorted_distances, energy);
    out.radius = radius;
    out.energy_spent = spent;
    return out;
}

/// Unit vector (in the p-norm) with isotropic Gaussian direction.
inline FeatureVector random_direction(std::size_t m, double p, Rng& rng) {
    FeatureVector v(m);
    double norm = 0.0;
    do {
        for (double& x : v) x = rng.normal();
        norm = pnorm(v, p);
    } while (!(norm > 0.0));
    for (double& x : v) x /= norm;
    return v;
}

struct CleaningResult {
    Matrix majority;
    /// Accumulated displacement per input majority row (zero rows for
    /// removal and ignoring).
    Matrix translations;
    /// Input row index of every retained majority observation.
    std::vector<std::size_t> kept;
};

/// Cleans majority observations lying strictly inside any sphere. Distances
/// are always measured against the original positions; translations from
/// several spheres accumulate and are applied once.
inline CleaningResult clean_majority(const BinarySplit& split, const SphereSet& spheres,
                                     CleaningStrategy strategy, double p, Rng& rng) {
    const Matrix& maj = split.majority;
    const Matrix& mino = split.minority;
    if (spheres.radii.size() != mino.rows()) {
        throw Error("sphere count " + std::to_string(spheres.radii.size()) +
                    " does not match minority size " + std::to_string(mino.rows()));
    }
    const std::size_t m = mino.cols();
    CleaningResult out;
    out.translations = Matrix(maj.rows(), m, 0.0);

    if (strategy == CleaningStrategy::ignoring) {
        out.majority = maj;
        out.kept.resize(maj.rows());
        std::iota(out.kept.begin(), out.kept.end(), std::size_t{0});
        return out;
    }

    std::vector<char> inside(maj.rows(), 0);
    for (std::size_t i = 0; i < mino.rows(); ++i) {
        const double r = spheres.radii[i];
        if (!(r > 0.0)) continue;
        const auto center = mino.row(i);
        for (std::size_t j = 0; j < maj.rows(); ++j) {
            const auto x = maj.row(j);
            const double d = pnorm_distance(center, x, p);
            if (!(d < r)) continue;
            inside[j] = 1;
            if (strategy != CleaningStrategy::translation) continue;
            auto t = out.translations.row(j);
            if (d < kCoincidentDistance) {
                const auto dir = random_direction(m, p, rng);
                for (std::size_t k = 0; k < m; ++k) t[k] += r * dir[k];
            } else {
                const double scale = (r - d) / d;
                for (std::size_t k = 0; k < m; ++k) t[k] += scale * (x[k] - center[k]);
            }
        }
    }

    if (strategy == CleaningStrategy::translation) {
        out.majority = maj;
        for (std::size_t j = 0; j < maj.rows(); ++j) {
            if (!inside[j]) continue;
            auto row = out.majority.row(j);
            const auto t = out.translations.row(j);
            for (std::size_t k = 0; k < m; ++k) row[k] += t[k];
        }
        out.kept.resize(maj.rows());
        std::iota(out.kept.begin(), out.kept.end(), std::size_t{0});
    } else {
        out.majority = Matrix(0, maj.cols() == 0 ? m : maj.cols());
        for (std::size_t j = 0; j < maj.rows(); ++j) {
            if (inside[j]) continue;
            out.majority.append_row(maj.row(j));
            out.kept.push_back(j);
        }
    }
    return out;
}

/// Radii after the zero-radius floor, used both for inversion and for
/// sampling. `scale` is a typical pairwise distance of the problem.
inline std::vector<double> clamp_radii(const SphereSet& spheres, double scale) {
    const double floor_value = kRadiusFloorFactor * std::max(scale, 0.0);
    std::vector<double> out(spheres.radii.size());
    bool any_positive = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(spheres.radii[i], floor_value);
        any_positive = any_positive || out[i] > 0.0;
    }
    if (!any_positive) throw Error("degenerate geometry: every sphere radius is zero");
    return out;
}

inline double mean_radius(const SphereSet& spheres) {
    if (spheres.radii.empty()) return 0.0;
    return std::accumulate(spheres.radii.begin(), spheres.radii.end(), 0.0) /
           static_cast<double>(spheres.radii.size());
}

/// Number of synthetic observations to generate around each minority seed.
/// Proportional selection weights seed i by 1/r_i and floors each share; any
/// shortfall is left ungenerated. Random selection assigns the whole target to
/// seeds drawn uniformly with replacement. A non-positive `scale` falls back
/// to the mean radius for the zero-radius floor.
inline std::vector<std::size_t> generation_counts(const SphereSet& spheres, std::size_t n_maj,
                                                  std::size_t n_min, OversamplingRatio ratio,
                                                  SelectionStrategy selection, Rng& rng,
                                                  double scale = 0.0) {
    const std::size_t k = spheres.radii.size();
    std::vector<std::size_t> g(k, 0);
    const std::size_t target = ratio.target(n_maj, n_min);
    if (target == 0 || k == 0) return g;

    if (selection == SelectionStrategy::random) {
        for (std::size_t t = 0; t < target; ++t) ++g[rng.index(k)];
        return g;
    }

    for (double r : spheres.radii) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw Error("sphere radius must be finite and >= 0");
    }
    const auto radii = clamp_radii(spheres, scale > 0.0 ? scale : mean_radius(spheres));
    // a zero radius left after clamping carries no weight
    double total = 0.0;
    for (double r : radii)
        if (r > 0.0) total += 1.0 / r;
    const double gap = static_cast<double>(target);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(radii[i] > 0.0)) continue;
        g[i] = static_cast<std::size_t>(std::floor((1.0 / radii[i]) / total * gap));
    }
    return g;
}

/// `count` points drawn uniformly from the p-norm ball of the given radius
/// around `center`.
inline Matrix synthesize(std::span<const double> center, double radius, std::size_t count,
                         double p, Rng& rng) {
    const std::size_t m = center.size();
    Matrix out(0, m);
    if (count == 0) return out;
    if (!(radius > 0.0)) throw Error("synthesis radius must be positive, got " + format_number(radius));
    check_norm_order(p);
    out.reserve_rows(count);
    FeatureVector point(m);
    for (std::size_t c = 0; c < count; ++c) {
        if (p == 2.0) {
            const auto dir = random_direction(m, 2.0, rng);
            const double scale = radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(m));
            for (std::size_t k = 0; k < m; ++k) point[k] = center[k] + scale * dir[k];
        } else if (std::isinf(p)) {
            for (std::size_t k = 0; k < m; ++k) point[k] = center[k] + radius * (2.0 * rng.uniform() - 1.0);
        } else {
            // generalized-Gaussian construction: g / (||g||_p^p + E)^(1/p) is
            // uniform in the unit p-ball when g_k ~ exp(-|t|^p), E ~ Exp(1)
            FeatureVector g(m);
            double sum = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double magnitude = std::pow(rng.gamma(1.0 / p), 1.0 / p);
                g[k] = rng.uniform() < 0.5 ? -magnitude : magnitude;
                sum += std::pow(magnitude, p);
            }
            const double denom = std::pow(sum + rng.exponential(), 1.0 / p);
            for (std::size_t k = 0; k < m; ++k) point[k] = center[k] + radius * g[k] / denom;
        }
        out.append_row(point);
    }
    return out;
}

struct BinaryCcrResult {
    Matrix cleaned_majority;
    /// Input majority row for each row of cleaned_majority.
    std::vector<std::size_t> kept;
    Matrix translations;
    Matrix synthetic;
    /// Minority row each synthetic observation was generated around.
    std::vector<std::size_t> synthetic_seed;
    SphereSet spheres;
    std::vector<std::size_t> counts;
};

inline BinaryCcrResult binary_ccr(const BinarySplit& split, const CleaningConfig& config) {
    split.validate();
    config.validate();
    Rng rng(config.seed);
    const Matrix& mino = split.minority;
    const std::size_t n_min = mino.rows();
    const std::size_t n_maj = split.majority.rows();

    BinaryCcrResult out;
    out.spheres.radii.resize(n_min);
    double distance_sum = 0.0;
    for (std::size_t i = 0; i < n_min; ++i) {
        auto e = expand_sphere(mino.row(i), split.majority, config.energy, config.p);
        out.spheres.radii[i] = e.radius;
        for (double d : e.sorted_distances) distance_sum += d;
    }
    const double scale = n_maj > 0 ? distance_sum / static_cast<double>(n_maj * n_min)
                                   : mean_radius(out.spheres);

    auto cleaned = clean_majority(split, out.spheres, config.cleaning, config.p, rng);
    out.cleaned_majority = std::move(cleaned.majority);
    out.kept = std::move(cleaned.kept);
    out.translations = std::move(cleaned.translations);

    out.counts = generation_counts(out.spheres, n_maj, n_min, config.ratio, config.selection, rng, scale);
    out.synthetic = Matrix(0, mino.cols());
    const std::size_t total = std::accumulate(out.counts.begin(), out.counts.end(), std::size_t{0});
    if (total == 0) return out;

    const auto radii = clamp_radii(out.spheres, scale);
    out.synthetic.reserve_rows(total);
    out.synthetic_seed.reserve(total);
    for (std::size_t i = 0; i < n_min; ++i) {
        if (out.counts[i] == 0) continue;
        if (!(radii[i] > 0.0)) throw Error("degenerate geometry: zero radius around a selected seed");
        out.synthetic.append_rows(synthesize(mino.row(i), radii[i], out.counts[i], config.p, rng));
        out.synthetic_seed.insert(out.synthetic_seed.end(), out.counts[i], i);
    }
    return out;
}

}  // namespace mcccr
