#include <gtest/gtest.h>

#include <cmath>

#include "offload/errors.hpp"
#include "offload/mobility.hpp"
#include "oracles.hpp"

using namespace offload;

TEST(Mobility, GridRowsFollowNeighbourCounts) {
    const auto m = build_grid_mobility(4, 4, 0.6);
    // interior cell 5 = (1,1)
    EXPECT_DOUBLE_EQ(m.probability(5, 5), 0.6);
    for (int n : {1, 4, 6, 9}) EXPECT_NEAR(m.probability(5, n), 0.1, 1e-15);
    // corner
    EXPECT_NEAR(m.probability(0, 1), 0.2, 1e-15);
    EXPECT_NEAR(m.probability(0, 4), 0.2, 1e-15);
    // edge
    for (int n : {0, 2, 5}) EXPECT_NEAR(m.probability(1, n), 0.4 / 3, 1e-15);
    EXPECT_EQ(m.probability(0, 5), 0.0);
    EXPECT_EQ(m.probability(0, 15), 0.0);
}

TEST(Mobility, RowsAreStochastic) {
    for (auto adj : {Adjacency::VonNeumann, Adjacency::Moore}) {
        const auto m = build_grid_mobility(3, 5, 0.3, adj);
        for (int r = 0; r < m.size(); ++r) {
            double s = 0.0;
            for (int c = 0; c < m.size(); ++c) {
                EXPECT_GE(m.probability(r, c), 0.0);
                s += m.probability(r, c);
            }
            EXPECT_NEAR(s, 1.0, 1e-12);
        }
    }
}

TEST(Mobility, MooreAdjacencyIncludesDiagonals) {
    const auto m = build_grid_mobility(3, 3, 0.2, Adjacency::Moore);
    EXPECT_NEAR(m.probability(4, 0), 0.1, 1e-15);
    EXPECT_NEAR(m.probability(0, 4), 0.8 / 3, 1e-15);
}

TEST(Mobility, StayOneIsIdentity) {
    const auto m = build_grid_mobility(2, 3, 1.0);
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) EXPECT_EQ(m.probability(r, c), r == c ? 1.0 : 0.0);
    }
    Rng rng(3);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(next_location(m, 4, rng), 4);
    const auto trace = sample_trace(m, 2, 30, rng);
    for (auto l : trace) EXPECT_EQ(l, 2);
}

TEST(Mobility, SingleCellNeedsStayOne) {
    EXPECT_THROW(build_grid_mobility(1, 1, 0.5), ConfigError);
    EXPECT_NO_THROW(build_grid_mobility(1, 1, 1.0));
    EXPECT_THROW(build_grid_mobility(0, 3, 1.0), ConfigError);
    EXPECT_THROW(build_grid_mobility(2, 2, 1.5), ConfigError);
}

TEST(Mobility, TransposedGridPermutesMatrix) {
    const auto a = build_grid_mobility(2, 3, 0.5);
    const auto b = build_grid_mobility(3, 2, 0.5);
    auto transpose = [](int l, int w, int h) { return (l % w) * h + l / w; };
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
            EXPECT_DOUBLE_EQ(a.probability(r, c), b.probability(transpose(r, 2, 3), transpose(c, 2, 3)));
        }
    }
}

TEST(Mobility, RejectsNonStochasticRows) {
    EXPECT_THROW(MobilityModel(2, 1, {0.5, 0.4, 0.0, 1.0}), ConfigError);
    EXPECT_THROW(MobilityModel(2, 1, {1.2, -0.2, 0.0, 1.0}), ConfigError);
    EXPECT_THROW(MobilityModel(2, 1, {1.0}), ConfigError);
}

TEST(Mobility, EmpiricalRowFrequency) {
    const MobilityModel m(2, 1, {0.6, 0.4, 0.0, 1.0});
    Rng rng(11);
    int stay = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) stay += next_location(m, 0, rng) == 0;
    EXPECT_NEAR(static_cast<double>(stay) / n, 0.6, 0.01);
}

TEST(Mobility, NeverJumpsToNonAdjacentCell) {
    const auto m = build_grid_mobility(4, 4, 0.6);
    Rng rng(5);
    LocationId l = 0;
    for (int i = 0; i < 20000; ++i) {
        const LocationId k = next_location(m, l, rng);
        EXPECT_LE(std::abs(k % 4 - l % 4) + std::abs(k / 4 - l / 4), 1);
        l = k;
    }
}

TEST(Mobility, TraceShapeAndDeterminism) {
    const auto m = build_grid_mobility(4, 4, 0.6);
    Rng a(99), b(99);
    const auto ta = sample_trace(m, 3, 50, a);
    const auto tb = sample_trace(m, 3, 50, b);
    EXPECT_EQ(ta, tb);
    ASSERT_EQ(ta.size(), 50u);
    EXPECT_EQ(ta[0], 3);
    Rng c(1);
    EXPECT_EQ(sample_trace(m, 7, 1, c), std::vector<LocationId>{7});
    EXPECT_THROW(sample_trace(m, 7, 0, c), ConfigError);
}

TEST(Mobility, LongRunFrequenciesMatchStationaryVector) {
    // Non-symmetric chain so the stationary vector is not uniform.
    const std::vector<double> p{0.6, 0.2, 0.2, 0.0,   //
                                0.1, 0.5, 0.0, 0.4,   //
                                0.3, 0.0, 0.4, 0.3,   //
                                0.0, 0.25, 0.25, 0.5};
    const MobilityModel m(2, 2, p);
    const auto pi = offload::testing::stationary_distribution(p, 4);
    Rng rng(2024);
    std::vector<int> visits(4, 0);
    LocationId l = 0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        l = next_location(m, l, rng);
        ++visits[static_cast<std::size_t>(l)];
    }
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(static_cast<double>(visits[static_cast<std::size_t>(i)]) / n, pi[static_cast<std::size_t>(i)], 0.01);
}

TEST(Rng, DerivedSeedsDependOnlyOnBaseAndIndex) {
    EXPECT_EQ(derive_seed(42, 3), derive_seed(42, 3));
    EXPECT_NE(derive_seed(42, 3), derive_seed(42, 4));
    EXPECT_NE(derive_seed(42, 3), derive_seed(43, 3));
    Rng a(derive_seed(1, 0));
    Rng b(derive_seed(1, 0));
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformAndBelowRanges) {
    Rng r(8);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        ASSERT_LT(r.below(7), 7u);
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}
