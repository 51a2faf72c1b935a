#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace mcccr;

TEST(Folds, PartitionAndStratify) {
    Rng gen(1);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t classes = 2 + gen.index(4);
        std::vector<ClassId> labels;
        for (std::size_t c = 0; c < classes; ++c)
            for (std::size_t i = 0, n = 10 + gen.index(40); i < n; ++i) labels.push_back(c);
        Rng rs(gen.index(1000));
        rs.shuffle(std::span<ClassId>(labels));
        const std::size_t k = 2 + gen.index(9);
        Rng rng(trial);
        const auto plan = stratified_folds(labels, k, rng);
        ASSERT_EQ(plan.folds.size(), k);
        std::vector<int> seen(labels.size(), 0);
        std::size_t lo = labels.size(), hi = 0;
        for (const auto& f : plan.folds) {
            EXPECT_EQ(f.train.size() + f.test.size(), labels.size());
            for (auto i : f.test) ++seen[i];
            std::set<std::size_t> tr(f.train.begin(), f.train.end());
            for (auto i : f.test) EXPECT_FALSE(tr.count(i));
            lo = std::min(lo, f.test.size());
            hi = std::max(hi, f.test.size());
            for (std::size_t c = 0; c < classes; ++c) {
                const auto total = static_cast<double>(std::count(labels.begin(), labels.end(), c));
                std::size_t in = 0;
                for (auto i : f.test) in += labels[i] == c;
                EXPECT_LE(std::fabs(static_cast<double>(in) - total / static_cast<double>(k)), 1.0);
            }
        }
        for (int s : seen) EXPECT_EQ(s, 1);
        EXPECT_LE(hi - lo, 1u);
    }
}

TEST(Folds, WarnsOnTinyClassesAndRejectsOneFold) {
    const std::vector<ClassId> labels{0, 0, 0, 0, 0, 1, 1};
    Rng rng(1);
    const auto plan = stratified_folds(labels, 3, rng);
    ASSERT_EQ(plan.warnings.size(), 1u);
    EXPECT_NE(plan.warnings[0].find("class 1"), std::string::npos);
    EXPECT_THROW(stratified_folds(labels, 1, rng), Error);
}

TEST(Folds, DeterministicPerSeed) {
    std::vector<ClassId> labels(100);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 3;
    Rng a(5), b(5), c(6);
    EXPECT_EQ(stratified_folds(labels, 5, a).folds[0].test, stratified_folds(labels, 5, b).folds[0].test);
    EXPECT_NE(stratified_folds(labels, 5, a).folds[0].test, stratified_folds(labels, 5, c).folds[0].test);
}

TEST(Standardizer, FitsOnTrainOnly) {
    const Matrix train = Matrix::from_rows({{1, 5}, {3, 5}});
    Standardizer s;
    s.fit(train);
    EXPECT_EQ(s.mean(), (std::vector<double>{2, 5}));
    EXPECT_EQ(s.scale(), (std::vector<double>{1, 1}));
    EXPECT_EQ(s.transform(Matrix::from_rows({{4, 7}})), Matrix::from_rows({{2, 2}}));
}

TEST(Knn, NearestAndTieBreaks) {
    LabeledDataset train;
    train.features = Matrix::from_rows({{0.0}, {1.0}, {-1.0}, {10.0}});
    train.labels = {0, 1, 2, 1};
    const auto nn = nearest_neighbors(train.features, Matrix::from_rows({{0.1}}), 3, 2.0);
    ASSERT_EQ(nn[0].size(), 3u);
    EXPECT_EQ(nn[0][0].index, 0u);
    EXPECT_EQ(nn[0][1].index, 1u);
    EXPECT_EQ(nn[0][2].index, 2u);
    EXPECT_EQ(knn_classify(train, Matrix::from_rows({{0.1}}), 1), (std::vector<ClassId>{0}));
    // three-way tie: every class one vote, class 0 nearest
    EXPECT_EQ(knn_classify(train, Matrix::from_rows({{0.1}}), 3), (std::vector<ClassId>{0}));
    // equidistant neighbours: index order decides who is included
    const auto eq = nearest_neighbors(train.features, Matrix::from_rows({{0.0}}), 2, 2.0);
    EXPECT_EQ(eq[0][1].index, 1u);
}

TEST(Knn, VoteTieGoesToNearerThenLowerId) {
    const std::vector<ClassId> labels{0, 1, 1, 0};
    const std::vector<Neighbor> nn{{1.0, 1}, {1.5, 0}, {2.0, 2}, {2.5, 3}};
    // class 1: (1 + 2)/2 = 1.5, class 0: (1.5 + 2.5)/2 = 2
    EXPECT_EQ(vote(nn, labels, 4), 1u);
    const std::vector<Neighbor> same{{1.0, 0}, {1.0, 1}};
    EXPECT_EQ(vote(same, labels, 2), 0u);
}

TEST(Knn, Validation) {
    LabeledDataset empty;
    empty.features = Matrix(0, 1);
    EXPECT_THROW(knn_classify(empty, Matrix::from_rows({{0.0}}), 1), Error);
    LabeledDataset one;
    one.features = Matrix::from_rows({{0.0}});
    one.labels = {0};
    EXPECT_THROW(knn_classify(one, Matrix::from_rows({{0.0}}), 0), Error);
    EXPECT_EQ(knn_classify(one, Matrix::from_rows({{5.0}}), 3), (std::vector<ClassId>{0}));
}
