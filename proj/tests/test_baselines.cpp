#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace mcccr;

namespace {

// distance from x to segment [a, b]
double segment_distance(std::span<const double> x, std::span<const double> a, std::span<const double> b) {
    double ab2 = 0.0, t = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        ab2 += (b[k] - a[k]) * (b[k] - a[k]);
        t += (x[k] - a[k]) * (b[k] - a[k]);
    }
    t = ab2 > 0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double p = a[k] + t * (b[k] - a[k]);
        d += (x[k] - p) * (x[k] - p);
    }
    return std::sqrt(d);
}

}  // namespace

TEST(Neighbors, OrderedByDistanceThenIndex) {
    const Matrix pts = Matrix::from_rows({{0.0}, {1.0}, {-1.0}, {3.0}});
    const auto nn = within_set_neighbors(pts, 2, 2.0);
    EXPECT_EQ(nn[0], (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(nn[3], (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(within_set_neighbors(pts, 10, 2.0)[0].size(), 3u);
}

TEST(Smote, PointsLieOnSegmentsToNeighbours) {
    Rng gen(1);
    const Matrix pts = fixture::gaussian_cloud(gen, 12, 3, 0.0, 1.0);
    const std::size_t k = 3;
    const auto nn = within_set_neighbors(pts, k, 2.0);
    Rng rng(9);
    const Matrix synth = smote(pts, k, 200, rng);
    ASSERT_EQ(synth.rows(), 200u);
    for (std::size_t s = 0; s < synth.rows(); ++s) {
        double best = 1e300;
        for (std::size_t i = 0; i < pts.rows(); ++i)
            for (std::size_t j : nn[i]) best = std::min(best, segment_distance(synth.row(s), pts.row(i), pts.row(j)));
        EXPECT_LT(best, 1e-9);
    }
}

TEST(Smote, TwoPointsAndErrors) {
    const Matrix two = Matrix::from_rows({{0.0, 0.0}, {2.0, 2.0}});
    Rng rng(1);
    const Matrix s = smote(two, 5, 10, rng);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        EXPECT_DOUBLE_EQ(s(i, 0), s(i, 1));
        EXPECT_GT(s(i, 0), 0.0);
        EXPECT_LT(s(i, 0), 2.0);
    }
    EXPECT_THROW(smote(Matrix::from_rows({{1.0}}), 5, 1, rng), Error);
    EXPECT_THROW(smote(two, 0, 1, rng), Error);
    EXPECT_EQ(smote(two, 1, 0, rng).rows(), 0u);
}

TEST(SmoteAll, BalancesEveryClass) {
    Rng gen(2);
    const auto ds = fixture::random_multiclass(gen, {40, 7, 22, 40}, 2);
    const auto out = smote_all(ds, 5, OversamplingRatio::balanced(), 3);
    EXPECT_EQ(out.dataset.class_counts(), (std::vector<std::size_t>{40, 40, 40, 40}));
    EXPECT_EQ(out.synthetic_count(), 33u + 18u);
    EXPECT_TRUE(out.warnings.empty());
    // original rows untouched and first
    for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(out.origin[i], static_cast<std::int64_t>(i));
    EXPECT_EQ(out.dataset.features.select_rows(std::vector<std::size_t>{0, 1, 2}), ds.features.select_rows(std::vector<std::size_t>{0, 1, 2}));
}

TEST(SmoteAll, PercentRatio) {
    Rng gen(2);
    const auto ds = fixture::random_multiclass(gen, {100, 20, 10}, 2);
    const auto out = smote_all(ds, 5, OversamplingRatio::of_percent(150), 3);
    EXPECT_EQ(out.dataset.class_counts(), (std::vector<std::size_t>{100, 50, 25}));
}

TEST(SmoteAll, SingletonClassIsSkippedWithWarning) {
    Rng gen(3);
    const auto ds = fixture::random_multiclass(gen, {20, 1, 5}, 2);
    const auto out = smote_all(ds, 5, OversamplingRatio::balanced(), 1);
    const auto counts = out.dataset.class_counts();
    EXPECT_EQ(counts[1], 1u);
    EXPECT_EQ(counts[2], 20u);
    ASSERT_EQ(out.warnings.size(), 1u);
    EXPECT_NE(out.warnings[0].find("class 1"), std::string::npos);
}

TEST(SmoteAll, DeterministicPerSeed) {
    Rng gen(4);
    const auto ds = fixture::random_multiclass(gen, {30, 10, 12}, 3);
    const auto a = smote_all(ds, 3, OversamplingRatio::balanced(), 8);
    const auto b = smote_all(ds, 3, OversamplingRatio::balanced(), 8);
    EXPECT_EQ(a.dataset.features, b.dataset.features);
    EXPECT_NE(smote_all(ds, 3, OversamplingRatio::balanced(), 9).dataset.features, a.dataset.features);
}

TEST(Resample, DispatchesByMethod) {
    Rng gen(5);
    const auto ds = fixture::random_multiclass(gen, {30, 10}, 2);
    MethodParams none{MethodKind::none, {}, 5};
    EXPECT_EQ(resample(ds, none, 1).dataset.features, ds.features);
    MethodParams sm{MethodKind::smote_all, {}, 5};
    EXPECT_EQ(resample(ds, sm, 1).dataset.class_counts(), (std::vector<std::size_t>{30, 30}));
    MethodParams cc;
    EXPECT_GT(resample(ds, cc, 1).synthetic_count(), 0u);
    EXPECT_EQ(parse_method("smote-all"), MethodKind::smote_all);
    EXPECT_THROW(parse_method("adasyn"), Error);
}
