#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"

using namespace mcccr;

namespace {

Matrix column(std::initializer_list<double> xs) {
    Matrix m(0, 1);
    for (double x : xs) m.append_row(std::vector<double>{x});
    return m;
}

std::size_t spheres_containing(const BinarySplit& s, const SphereSet& sp, std::span<const double> x, double p,
                               std::size_t* which = nullptr) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.minority.rows(); ++i) {
        if (pnorm_distance(s.minority.row(i), x, p) < sp.radii[i]) {
            ++count;
            if (which) *which = i;
        }
    }
    return count;
}

}  // namespace

TEST(Expansion, HandTracedRadii) {
    const std::vector<double> a{2, 5, 20};
    EXPECT_DOUBLE_EQ(expand_over_sorted(a, 10.0).first, 5.0 + 2.0 / 3.0);
    const std::vector<double> b{2, 5};
    EXPECT_DOUBLE_EQ(expand_over_sorted(b, 100.0).first, 5.0);
    EXPECT_DOUBLE_EQ(expand_over_sorted(std::vector<double>{}, 10.0).first, 10.0);
}

TEST(Expansion, ExactlyExhaustedBudgetStopsOnThePoint) {
    // 1 unit to reach 1, then 2 per unit: budget 3 lands exactly on 2
    const std::vector<double> d{1, 2, 10};
    EXPECT_DOUBLE_EQ(expand_over_sorted(d, 3.0).first, 2.0);
}

TEST(Expansion, CoincidentMajorityCostsNothingToReach) {
    const std::vector<double> d{0, 0, 4};
    // three points inside after reaching zero distance twice: 1/3 per unit
    EXPECT_DOUBLE_EQ(expand_over_sorted(d, 1.0).first, 1.0 / 3.0);
}

TEST(Expansion, AgreesWithStepSimulator) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = rng.index(12);
        const double center = 10.0 * rng.uniform() - 5.0;
        Matrix maj(0, 1);
        std::vector<double> dist;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = 10.0 * rng.uniform() - 5.0;
            maj.append_row(std::vector<double>{x});
            dist.push_back(std::fabs(x - center));
        }
        const double energy = 0.05 + 4.0 * rng.uniform();
        const std::vector<double> c{center};
        const double got = expand_sphere(c, maj, energy, 2.0).radius;
        EXPECT_NEAR(got, oracle::step_expansion(dist, energy, 1e-4), 1e-2) << "trial " << trial;
    }
}

TEST(Expansion, SortsDistancesWithIndexTieBreak) {
    const Matrix maj = column({3, -1, 1, 3});
    const std::vector<double> c{0.0};
    const auto e = expand_sphere(c, maj, 0.5, 2.0);
    EXPECT_EQ(e.order, (std::vector<std::size_t>{1, 2, 0, 3}));
    EXPECT_EQ(e.sorted_distances, (std::vector<double>{1, 1, 3, 3}));
    EXPECT_DOUBLE_EQ(e.radius, 0.5);
}

TEST(Expansion, RejectsBadInput) {
    const Matrix maj = column({1});
    const std::vector<double> c{0.0};
    EXPECT_THROW(expand_sphere(c, maj, 0.0, 2.0), Error);
    EXPECT_THROW(expand_sphere(c, maj, 1.0, 0.5), Error);
    const std::vector<double> c2{0.0, 1.0};
    EXPECT_THROW(expand_sphere(c2, maj, 1.0, 2.0), Error);
}

TEST(Norms, KnownValues) {
    const std::vector<double> v{3, -4};
    EXPECT_DOUBLE_EQ(pnorm(v, 2.0), 5.0);
    EXPECT_DOUBLE_EQ(pnorm(v, 1.0), 7.0);
    EXPECT_DOUBLE_EQ(pnorm(v, kInfinityNorm), 4.0);
    EXPECT_NEAR(pnorm(v, 3.0), std::cbrt(27.0 + 64.0), 1e-12);
    const std::vector<double> a{1, 1}, b{1, 1, 1};
    EXPECT_THROW(pnorm_distance(a, b, 2.0), Error);
}

// Two minority points, seven majority points on a line, energy 10.
class GoldenLine : public ::testing::Test {
protected:
    BinarySplit split{column({2, 5, 20, 40, 50, 60, 70}), column({0, 28})};
    CleaningConfig config = [] {
        CleaningConfig c;
        c.energy = 10.0;
        c.seed = 5;
        return c;
    }();
};

TEST_F(GoldenLine, Radii) {
    const auto out = binary_ccr(split, config);
    ASSERT_EQ(out.spheres.radii.size(), 2u);
    EXPECT_NEAR(out.spheres.radii[0], 17.0 / 3.0, 1e-12);
    EXPECT_NEAR(out.spheres.radii[1], 9.0, 1e-12);
}

TEST_F(GoldenLine, TranslationPushesToTheSurface) {
    const auto out = binary_ccr(split, config);
    const std::vector<double> expected{17.0 / 3.0, 17.0 / 3.0, 19, 40, 50, 60, 70};
    ASSERT_EQ(out.cleaned_majority.rows(), expected.size());
    for (std::size_t j = 0; j < expected.size(); ++j) EXPECT_NEAR(out.cleaned_majority(j, 0), expected[j], 1e-12) << j;
}

TEST_F(GoldenLine, ProportionalCountsFloorEachShare) {
    const auto out = binary_ccr(split, config);
    EXPECT_EQ(out.counts, (std::vector<std::size_t>{3, 1}));
    ASSERT_EQ(out.synthetic.rows(), 4u);
    EXPECT_EQ(out.synthetic_seed, (std::vector<std::size_t>{0, 0, 0, 1}));
    for (std::size_t s = 0; s < 3; ++s) EXPECT_LE(std::fabs(out.synthetic(s, 0)), 17.0 / 3.0);
    EXPECT_LE(std::fabs(out.synthetic(3, 0) - 28.0), 9.0);
}

TEST_F(GoldenLine, RemovalDropsInteriorPoints) {
    config.cleaning = CleaningStrategy::removal;
    const auto out = binary_ccr(split, config);
    EXPECT_EQ(out.kept, (std::vector<std::size_t>{3, 4, 5, 6}));
    EXPECT_EQ(out.cleaned_majority, column({40, 50, 60, 70}));
}

TEST_F(GoldenLine, IgnoringLeavesMajorityUntouched) {
    config.cleaning = CleaningStrategy::ignoring;
    const auto out = binary_ccr(split, config);
    EXPECT_EQ(out.cleaned_majority, split.majority);
}

TEST_F(GoldenLine, ExplicitRatioIsClampedToTheGap) {
    config.ratio = OversamplingRatio::of_percent(500);
    EXPECT_EQ(binary_ccr(split, config).synthetic.rows(), 4u);
    config.ratio = OversamplingRatio::of_percent(100);  // target 2
    const auto out = binary_ccr(split, config);
    EXPECT_EQ(out.counts, (std::vector<std::size_t>{1, 0}));
}

TEST_F(GoldenLine, SameSeedSameOutput) {
    const auto a = binary_ccr(split, config);
    const auto b = binary_ccr(split, config);
    EXPECT_EQ(a.synthetic, b.synthetic);
    config.seed = 6;
    EXPECT_NE(binary_ccr(split, config).synthetic, a.synthetic);
}

TEST(Cleaning, OverlappingSpheresAccumulateFromOriginalPositions) {
    // majority at 1 sits inside both spheres (centres 0 and 2, radius 2)
    BinarySplit s{column({1}), column({0, 2})};
    Rng rng(1);
    const auto out = clean_majority(s, SphereSet{{2.0, 2.0}}, CleaningStrategy::translation, 2.0, rng);
    // +1 from the left sphere, -1 from the right
    EXPECT_NEAR(out.majority(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(out.translations(0, 0), 0.0, 1e-12);
}

TEST(Cleaning, BoundaryPointIsNotInside) {
    BinarySplit s{column({2}), column({0})};
    Rng rng(1);
    const auto out = clean_majority(s, SphereSet{{2.0}}, CleaningStrategy::removal, 2.0, rng);
    EXPECT_EQ(out.kept.size(), 1u);
}

TEST(Cleaning, CoincidentPointIsPushedByTheRadius) {
    BinarySplit s{Matrix::from_rows({{1.0, 1.0}}), Matrix::from_rows({{1.0, 1.0}})};
    Rng rng(3);
    const auto out = clean_majority(s, SphereSet{{0.5}}, CleaningStrategy::translation, 2.0, rng);
    const std::vector<double> c{1.0, 1.0};
    EXPECT_NEAR(pnorm_distance(out.majority.row(0), c, 2.0), 0.5, 1e-12);
}

TEST(Cleaning, SphereCountMustMatch) {
    BinarySplit s{column({1}), column({0, 3})};
    Rng rng(1);
    EXPECT_THROW(clean_majority(s, SphereSet{{1.0}}, CleaningStrategy::translation, 2.0, rng), Error);
}

TEST(Invariants, RandomGeometry) {
    Rng gen(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = trial % 2 ? 5 : 2;
        const double p = std::vector<double>{1.0, 2.0, kInfinityNorm, 3.0}[(trial / 2) % 4];
        auto split = fixture::random_split(gen, m, 20 + gen.index(150), 5 + gen.index(40));
        CleaningConfig cfg;
        cfg.energy = 0.2 + 3.0 * gen.uniform();
        cfg.p = p;
        cfg.seed = gen.index(1000);
        const auto t = binary_ccr(split, cfg);
        for (std::size_t j = 0; j < split.majority.rows(); ++j) {
            std::size_t which = 0;
            if (spheres_containing(split, t.spheres, split.majority.row(j), p, &which) != 1) continue;
            EXPECT_NEAR(pnorm_distance(t.cleaned_majority.row(j), split.minority.row(which), p), t.spheres.radii[which], 1e-9);
        }
        for (std::size_t s = 0; s < t.synthetic.rows(); ++s) {
            const std::size_t i = t.synthetic_seed[s];
            EXPECT_LE(pnorm_distance(t.synthetic.row(s), split.minority.row(i), p), t.spheres.radii[i] * (1 + 1e-12));
        }
        cfg.cleaning = CleaningStrategy::removal;
        const auto r = binary_ccr(split, cfg);
        for (std::size_t j = 0; j < r.cleaned_majority.rows(); ++j)
            EXPECT_EQ(spheres_containing(split, r.spheres, r.cleaned_majority.row(j), p), 0u);
    }
}

TEST(Counts, BalanceTargetsTheGap) {
    Rng rng(1);
    const SphereSet sp{{1.0, 2.0, 4.0}};
    // weights 4/7, 2/7, 1/7 of 14
    EXPECT_EQ(generation_counts(sp, 17, 3, OversamplingRatio::balanced(), SelectionStrategy::proportional, rng),
              (std::vector<std::size_t>{8, 4, 2}));
    EXPECT_EQ(generation_counts(sp, 3, 3, OversamplingRatio::balanced(), SelectionStrategy::proportional, rng),
              (std::vector<std::size_t>{0, 0, 0}));
    EXPECT_EQ(generation_counts(sp, 2, 3, OversamplingRatio::balanced(), SelectionStrategy::proportional, rng),
              (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Counts, RandomSelectionSpendsTheWholeTarget) {
    Rng rng(9);
    const SphereSet sp{{1.0, 2.0, 4.0, 0.5}};
    const auto g = generation_counts(sp, 104, 4, OversamplingRatio::balanced(), SelectionStrategy::random, rng);
    EXPECT_EQ(std::accumulate(g.begin(), g.end(), std::size_t{0}), 100u);
    for (auto v : g) EXPECT_GT(v, 5u);
}

TEST(Counts, ZeroRadiusIsFlooredNotInfinite) {
    Rng rng(1);
    const SphereSet sp{{0.0, 1.0}};
    const auto g = generation_counts(sp, 12, 2, OversamplingRatio::balanced(), SelectionStrategy::proportional, rng, 1.0);
    EXPECT_EQ(g[1], 0u);
    EXPECT_EQ(g[0], 9u);  // floor(10 * 1e6 / (1e6 + 1))
    EXPECT_THROW(generation_counts(SphereSet{{0.0, 0.0}}, 12, 2, OversamplingRatio::balanced(),
                                   SelectionStrategy::proportional, rng, 0.0),
                 Error);
}

TEST(Counts, PercentTargets) {
    EXPECT_EQ(OversamplingRatio::of_percent(150).target(100, 10), 15u);
    EXPECT_EQ(OversamplingRatio::of_percent(1000).target(30, 10), 20u);
    EXPECT_EQ(OversamplingRatio::of_percent(50).target(5, 10), 0u);
    EXPECT_EQ(OversamplingRatio::balanced().target(30, 10), 20u);
}

class BallSampling : public ::testing::TestWithParam<std::pair<double, std::size_t>> {};

TEST_P(BallSampling, UniformInsideTheBall) {
    const auto [p, m] = GetParam();
    Rng rng(77);
    const std::vector<double> c(m, 1.5);
    const double r = 2.0;
    const std::size_t n = 6000;
    const Matrix pts = synthesize(c, r, n, p, rng);
    ASSERT_EQ(pts.rows(), n);
    // radial CDF of a uniform ball is t^m, so (|x|/r)^m is uniform
    double sum = 0.0;
    std::vector<double> centroid(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pnorm_distance(pts.row(i), c, p);
        ASSERT_LE(d, r * (1 + 1e-12));
        sum += std::pow(d / r, static_cast<double>(m));
        for (std::size_t k = 0; k < m; ++k) centroid[k] += pts(i, k) / static_cast<double>(n);
    }
    EXPECT_NEAR(sum / static_cast<double>(n), 0.5, 0.02);
    for (double v : centroid) EXPECT_NEAR(v, 1.5, 0.06);
}

INSTANTIATE_TEST_SUITE_P(Norms, BallSampling,
                         ::testing::Values(std::pair{2.0, std::size_t{2}}, std::pair{2.0, std::size_t{7}},
                                           std::pair{1.0, std::size_t{2}}, std::pair{1.0, std::size_t{6}},
                                           std::pair{3.0, std::size_t{4}}, std::pair{kInfinityNorm, std::size_t{3}}));

TEST(Synthesis, ZeroCountAndBadRadius) {
    Rng rng(1);
    const std::vector<double> c{0.0};
    EXPECT_EQ(synthesize(c, 0.0, 0, 2.0, rng).rows(), 0u);
    EXPECT_THROW(synthesize(c, 0.0, 1, 2.0, rng), Error);
}

TEST(BinaryCcr, EmptyMajorityUsesEnergyAsRadius) {
    BinarySplit s{Matrix(0, 1), column({0, 1})};
    CleaningConfig cfg;
    cfg.energy = 3.0;
    const auto out = binary_ccr(s, cfg);
    EXPECT_EQ(out.spheres.radii, (std::vector<double>{3.0, 3.0}));
    EXPECT_EQ(out.synthetic.rows(), 0u);
}

TEST(BinaryCcr, ConfigValidation) {
    BinarySplit s{column({1}), column({0})};
    CleaningConfig cfg;
    cfg.energy = -1;
    EXPECT_THROW(binary_ccr(s, cfg), Error);
    cfg.energy = 1;
    cfg.p = 0.5;
    EXPECT_THROW(binary_ccr(s, cfg), Error);
    BinarySplit bad{Matrix::from_rows({{1.0, 2.0}}), column({0})};
    EXPECT_THROW(binary_ccr(bad, CleaningConfig{}), Error);
}
