#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "cevdetect/cev_statistics.hpp"
#include "cevdetect/models.hpp"

using namespace cevdetect;

namespace {

constexpr double kLn2 = std::numbers::ln2;

BivariateSample ordered(std::vector<double> x_star) {
    // ys descending so that the view keeps x_star in the given order
    std::vector<double> ys(x_star.size());
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = static_cast<double>(ys.size() - i);
    return BivariateSample(std::move(x_star), std::move(ys));
}

RankVector random_permutation(std::mt19937_64& rng, std::size_t k) {
    std::vector<std::uint32_t> r(k);
    std::iota(r.begin(), r.end(), 1u);
    std::shuffle(r.begin(), r.end(), rng);
    return RankVector(r);
}

RankVector random_tied(std::mt19937_64& rng, std::size_t k, int levels) {
    std::vector<double> xs(k);
    std::uniform_int_distribution<int> d(0, levels - 1);
    for (auto& x : xs) x = d(rng);
    return ranks_topk(build_view(ordered(xs)), k);
}

}  // namespace

TEST(Hillish, HandValues) {
    EXPECT_DOUBLE_EQ(hillish(RankVector({1})), 0.0);
    EXPECT_NEAR(hillish(RankVector({1, 2})), 0.5 * kLn2 * kLn2, 1e-15);
    EXPECT_NEAR(0.5 * kLn2 * kLn2, 0.240227, 1e-6);
}

TEST(Hillish, PairHandValue) {
    const auto v = build_view(ordered({1, 2}));
    const auto [pos, neg] = hillish_pair(v, 2);
    EXPECT_NEAR(pos, 0.5 * kLn2 * kLn2, 1e-15);
    EXPECT_DOUBLE_EQ(neg, 0.0);
}

TEST(Hillish, NegationReversesDistinctRanks) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> xs(200);
        for (auto& x : xs) x = g(rng);
        const auto v = build_view(ordered(xs));
        const std::size_t k = 2 + rng() % 199;
        const auto r = ranks_topk(v, k);
        const auto rn = ranks_topk(v.negated(), k);
        for (std::size_t i = 0; i < k; ++i) ASSERT_EQ(rn[i], k + 1 - r[i]);
        EXPECT_EQ(hillish_pair(v, k).second, hillish(rn));
    }
}

TEST(Hillish, NonNegative) {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t k = 1 + rng() % 300;
        EXPECT_GE(hillish(rep % 2 ? random_permutation(rng, k) : random_tied(rng, k, 4)), 0.0);
    }
}

TEST(Pickandsish, HandExample) {
    const auto v = build_view(ordered({4, 1, 3, 2}));
    const auto r = pickandsish(v, 4, 0.5);
    ASSERT_TRUE(r.has_value());
    EXPECT_DOUBLE_EQ(*r, 1.0);
}

TEST(Pickandsish, UndefinedOnZeroDenominator) {
    const auto v = build_view(ordered({2, 2, 2, 2, 2}));
    EXPECT_FALSE(pickandsish(v, 5, 0.5).has_value());
}

TEST(Pickandsish, Errors) {
    const auto v = build_view(ordered({4, 1, 3, 2, 5}));
    EXPECT_THROW(pickandsish(v, 3, 0.5), std::invalid_argument);
    EXPECT_THROW(pickandsish(v, 6, 0.5), std::out_of_range);
    EXPECT_THROW(pickandsish(v, 4, 0.0), std::invalid_argument);
    EXPECT_THROW(pickandsish(v, 4, 1.0), std::invalid_argument);
}

TEST(Pickandsish, AffineInvariance) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> xs(100);
        // dyadic values keep x -> 2x + 8 exact in floating point
        for (auto& x : xs) x = std::ldexp(std::floor(u(rng) * 1024.0), -10);
        std::vector<double> ts;
        for (double x : xs) ts.push_back(2.0 * x + 8.0);
        const auto v = build_view(ordered(xs));
        const auto w = build_view(ordered(ts));
        const std::size_t k = 4 + rng() % 97;
        const double p = 0.05 + 0.9 * u(rng);
        EXPECT_EQ(pickandsish(v, k, p), pickandsish(w, k, p));
    }
}

TEST(Kendall, Extremes) {
    EXPECT_DOUBLE_EQ(kendall_tau(RankVector({1, 2, 3, 4, 5})), 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(RankVector({5, 4, 3, 2, 1})), -1.0);
    EXPECT_DOUBLE_EQ(kendall_tau_bruteforce(RankVector({1, 2})), 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau_bruteforce(RankVector({2, 1})), -1.0);
    EXPECT_THROW(kendall_tau(RankVector({1})), std::invalid_argument);
}

TEST(Kendall, FastEqualsBruteForce) {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t k = 2 + rng() % 499;
        const auto r = rep % 2 ? random_permutation(rng, k) : random_tied(rng, k, 1 + rep % 9);
        ASSERT_EQ(concordant_pairs(r), concordant_pairs_bruteforce(r));
        ASSERT_EQ(kendall_tau(r), kendall_tau_bruteforce(r));
        EXPECT_GE(kendall_tau(r), -1.0);
        EXPECT_LE(kendall_tau(r), 1.0);
    }
}

TEST(Kendall, PermutationOfHundred) {
    std::mt19937_64 rng(100);
    const auto r = random_permutation(rng, 100);
    EXPECT_EQ(kendall_tau(r), kendall_tau_bruteforce(r));
}

TEST(Kendall, NegationAntisymmetry) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> xs(300);
        for (auto& x : xs) x = g(rng);
        const auto v = build_view(ordered(xs));
        const std::size_t k = 2 + rng() % 299;
        EXPECT_EQ(kendall_tau(ranks_topk(v.negated(), k)), -kendall_tau(ranks_topk(v, k)));
    }
}

TEST(HillishIdentity, HandExample) {
    const RankVector r({1, 2});
    const auto d = hillish_integral_identity(r);
    EXPECT_NEAR(d.integral, kLn2 * std::log(3.0) / 2.0, 1e-15);
    EXPECT_NEAR(d.correction, std::log(1.5) * kLn2 / 2.0, 1e-15);
    EXPECT_NEAR(d.integral - d.correction, hillish(r), 1e-15);
}

TEST(HillishIdentity, RandomRanks) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t k = 2 + rng() % 9999;
        const auto r = rep % 2 ? random_permutation(rng, k) : random_tied(rng, k, 50);
        const auto d = hillish_integral_identity(r);
        EXPECT_LT(std::abs(d.integral - hillish(r) - d.correction), 1e-12) << "k=" << k;
    }
}

TEST(MonotoneInvariance, HillishAndKendall) {
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 50; ++rep) {
        const auto s = simulate(ModelSpec::example2(0.5), 500, 100 + rep);
        std::vector<double> xt, yt;
        for (double x : s.xs()) xt.push_back(std::log(x) * 3.0 - 1.0);
        for (double y : s.ys()) yt.push_back(std::sqrt(y));
        const auto a = compute_traces(s, KGrid({5, 20, 50, 120}));
        const auto b = compute_traces(BivariateSample(xt, yt), KGrid({5, 20, 50, 120}));
        EXPECT_EQ(a.hillish, b.hillish);
        EXPECT_EQ(a.hillish_neg, b.hillish_neg);
        EXPECT_EQ(a.kendall, b.kendall);
    }
}

TEST(ComputeTraces, ShapeAndErrors) {
    const auto s = simulate(ModelSpec::example1(), 100, 1);
    const auto b = compute_traces(s, KGrid({2}));
    EXPECT_EQ(b.hillish.size(), 1u);
    EXPECT_EQ(b.hillish_neg.size(), 1u);
    EXPECT_EQ(b.kendall.size(), 1u);
    ASSERT_EQ(b.pickandsish.size(), 2u);
    EXPECT_FALSE(b.pickandsish[0].values[0].has_value());
    EXPECT_EQ(b.p_values(), kDefaultProbes);
    EXPECT_THROW(compute_traces(s, KGrid({50, 101})), std::out_of_range);
    const std::vector<double> bad{0.5, 1.5};
    EXPECT_THROW(compute_traces(s, KGrid({5}), bad), std::invalid_argument);
}

TEST(ComputeTraces, Deterministic) {
    const auto s = simulate(ModelSpec::example2(0.3), 1000, 5);
    const auto g = KGrid::default_for(1000);
    const auto a = compute_traces(s, g);
    const auto b = compute_traces(s, g);
    EXPECT_EQ(a.hillish, b.hillish);
    EXPECT_EQ(a.hillish_neg, b.hillish_neg);
    EXPECT_EQ(a.kendall, b.kendall);
    for (std::size_t j = 0; j < a.pickandsish.size(); ++j) EXPECT_EQ(a.pickandsish[j].values, b.pickandsish[j].values);
}

TEST(ComputeTraces, MatchesDirectEvaluation) {
    const auto s = simulate(ModelSpec::example2(0.5), 400, 2);
    const auto v = build_view(s);
    const KGrid g({4, 17, 40});
    const std::vector<double> ps{0.25, 0.5};
    const auto b = compute_traces(s, g, ps);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto r = ranks_topk(v, g[i]);
        EXPECT_EQ(b.hillish[i], hillish(r));
        EXPECT_EQ(b.hillish_neg[i], hillish(ranks_topk(v.negated(), g[i])));
        EXPECT_EQ(b.kendall[i], kendall_tau(r));
        EXPECT_EQ(b.pickandsish[1].values[i], pickandsish(v, g[i], 0.5));
    }
}

// Long-run levels in the stable region, seeded.
TEST(SimulatedLevels, Example1NearProductValues) {
    const auto s = simulate(ModelSpec::example1(), 20000, 3);
    const auto v = build_view(s);
    const auto [h, hn] = hillish_pair(v, 1000);
    EXPECT_NEAR(h, 1.0, 0.1);
    EXPECT_NEAR(hn, 1.0, 0.1);
    EXPECT_NEAR(kendall_tau(ranks_topk(v, 1000)), 0.0, 0.1);
    EXPECT_NEAR(*pickandsish(v, 1000, 0.5), 0.0, 0.3);
}

TEST(SimulatedLevels, Example2MatchesLimits) {
    const auto s = simulate(ModelSpec::example2(0.5), 20000, 3);
    const auto v = build_view(s);
    EXPECT_NEAR(hillish(ranks_topk(v, 1000)), hillish_limit_ex2(0.5), 0.07);
    EXPECT_NEAR(kendall_tau(ranks_topk(v, 1000)), kendall_limit_ex2(0.5), 0.07);
    EXPECT_NEAR(*pickandsish(v, 1000, 0.5), pickandsish_limit_ex2(0.5, 0.5), 0.5);
}
