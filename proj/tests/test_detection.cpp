#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "cevdetect/detection.hpp"
#include "cevdetect/models.hpp"

using namespace cevdetect;

namespace {

KGrid grid_1000() { return KGrid::default_for(1000); }

TraceBundle constant_bundle(double hill, double hill_neg, double pick, double kendall) {
    const auto g = grid_1000();
    const std::size_t m = g.size();
    return TraceBundle{.sample_size = 1000,
                       .kgrid = g,
                       .hillish = std::vector<double>(m, hill),
                       .hillish_neg = std::vector<double>(m, hill_neg),
                       .pickandsish = {{0.3, std::vector<MaybeReal>(m, pick)}, {0.6, std::vector<MaybeReal>(m, pick)}},
                       .kendall = std::vector<double>(m, kendall)};
}

}  // namespace

TEST(Stability, ConstantTraceIsStable) {
    const auto g = grid_1000();
    const std::vector<double> trace(g.size(), 1.0);
    const auto r = assess_stability("c", trace, g, 1000, StatisticScale::Rank, DetectionConfig{});
    EXPECT_TRUE(r.stable);
    EXPECT_EQ(*r.level, 1.0);
    EXPECT_EQ(*r.dispersion, 0.0);
    EXPECT_LT(r.k_lo, r.k_hi);
    EXPECT_GE(r.k_lo, 50u);
    EXPECT_LE(r.k_hi, 300u);
}

TEST(Stability, SteepMonotoneTraceIsUnstable) {
    const auto g = grid_1000();
    std::vector<double> trace;
    for (std::size_t i = 0; i < g.size(); ++i) trace.push_back(static_cast<double>(i));
    const auto r = assess_stability("m", trace, g, 1000, StatisticScale::Rank, DetectionConfig{});
    EXPECT_FALSE(r.stable);
    EXPECT_GE(*r.dispersion, 0.0);
}

TEST(Stability, PicksMinimumDispersionWindow) {
    const KGrid g = KGrid::range(50, 100);
    std::vector<double> trace;
    for (std::size_t i = 0; i < g.size(); ++i) trace.push_back(g[i] < 80 ? std::sin(static_cast<double>(i)) : 0.25);
    DetectionConfig c;
    c.window_frac = 0.2;
    const auto r = assess_stability("w", trace, g, 1000, StatisticScale::Rank, c);
    EXPECT_TRUE(r.stable);
    EXPECT_EQ(*r.level, 0.25);
    EXPECT_GT(r.k_hi, 85u);
}

TEST(Stability, UndefinedEntries) {
    const KGrid g = KGrid::range(50, 59);
    DetectionConfig c;
    c.window_frac = 1.0;
    std::vector<MaybeReal> trace(10, 0.0);
    trace[0] = std::nullopt;
    trace[5] = std::nullopt;
    auto r = assess_stability("u", std::span<const MaybeReal>(trace), g, 1000, StatisticScale::Ratio, c);
    EXPECT_TRUE(r.stable);
    EXPECT_EQ(r.undefined_count, 2u);
    trace[7] = std::nullopt;
    r = assess_stability("u", std::span<const MaybeReal>(trace), g, 1000, StatisticScale::Ratio, c);
    EXPECT_FALSE(r.stable);
    const std::vector<MaybeReal> empty(10);
    r = assess_stability("u", std::span<const MaybeReal>(empty), g, 1000, StatisticScale::Ratio, c);
    EXPECT_FALSE(r.stable);
    EXPECT_FALSE(r.level.has_value());
}

TEST(Stability, RatioScaleUsesRelativeSpread) {
    const KGrid g = KGrid::range(50, 59);
    DetectionConfig c;
    c.window_frac = 1.0;
    std::vector<double> trace{-3.0, -3.2, -2.8, -3.1, -2.9, -3.3, -2.7, -3.0, -3.1, -2.9};
    EXPECT_FALSE(assess_stability("r", trace, g, 1000, StatisticScale::Rank, c).stable);
    EXPECT_TRUE(assess_stability("r", trace, g, 1000, StatisticScale::Ratio, c).stable);
}

TEST(Stability, Errors) {
    const KGrid g({10, 20, 60, 70});
    const std::vector<double> trace(4, 0.0);
    EXPECT_THROW(assess_stability("e", trace, g, 1000, StatisticScale::Rank, DetectionConfig{}), std::invalid_argument);
    const std::vector<double> short_trace(3, 0.0);
    EXPECT_THROW(assess_stability("e", short_trace, g, 100, StatisticScale::Rank, DetectionConfig{}),
                 std::invalid_argument);
    try {
        assess_stability("e", trace, g, 1000, StatisticScale::Rank, DetectionConfig{});
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "window wider than grid");
    }
}

TEST(Stability, Example2KendallLevel) {
    // the Kendall limit of this model is -rho
    const auto s = simulate(ModelSpec::example2(0.5), 1000, 7);
    const auto b = compute_traces(s, grid_1000());
    const auto r = assess_stability("kendall", b.kendall, b.kgrid, 1000, StatisticScale::Rank, DetectionConfig{});
    EXPECT_TRUE(r.stable);
    EXPECT_GE(*r.level, -0.6);
    EXPECT_LE(*r.level, -0.4);
}

TEST(Verdict, ConstantBundles) {
    const DetectionConfig c;
    EXPECT_EQ(product_verdict(constant_bundle(1.0, 1.0, 0.0, 0.0), c).verdict, Verdict::CevProduct);
    EXPECT_EQ(product_verdict(constant_bundle(0.5, 1.2, -1.8, -0.5), c).verdict, Verdict::CevNonproduct);
    // Kendall at 0 cannot rescue Hillish away from 1
    EXPECT_EQ(product_verdict(constant_bundle(0.5, 1.2, 0.0, 0.0), c).verdict, Verdict::Inconclusive);
    // Hillish and Pickandsish at product values but Kendall far from 0
    EXPECT_EQ(product_verdict(constant_bundle(1.0, 1.0, 0.0, -0.6), c).verdict, Verdict::Inconclusive);
}

TEST(Verdict, KendallAloneNeverGivesProduct) {
    auto b = constant_bundle(1.0, 1.0, 0.0, 0.0);
    for (std::size_t i = 0; i < b.hillish.size(); ++i) b.hillish[i] = std::pow(-1.0, i) * 3.0;
    const auto v = product_verdict(b, DetectionConfig{});
    EXPECT_NE(v.verdict, Verdict::CevProduct);
    EXPECT_EQ(v.verdict, Verdict::Inconclusive);
}

TEST(Verdict, UnstableHillishWithStableKendallIsInconclusive) {
    auto b = constant_bundle(0.5, 0.5, -2.0, -0.5);
    for (std::size_t i = 0; i < b.hillish.size(); ++i) b.hillish_neg[i] = 0.1 * static_cast<double>(i);
    EXPECT_EQ(product_verdict(b, DetectionConfig{}).verdict, Verdict::Inconclusive);
}

TEST(Verdict, EvidenceCompleteness) {
    const auto v = product_verdict(constant_bundle(1.0, 1.0, 0.0, 0.0), DetectionConfig{});
    ASSERT_EQ(v.evidence.size(), 5u);
    EXPECT_EQ(v.evidence[0].statistic_id, "hillish");
    EXPECT_EQ(v.evidence[1].statistic_id, "hillish_neg");
    EXPECT_EQ(v.evidence[2].statistic_id, "pickandsish_p0.3");
    EXPECT_EQ(v.evidence[3].statistic_id, "pickandsish_p0.6");
    EXPECT_EQ(v.evidence[4].statistic_id, "kendall");
    EXPECT_EQ(v.thresholds.eps_hillish, DetectionConfig{}.eps_hillish);
}

TEST(Verdict, RequiresTwoDistinctProbes) {
    auto b = constant_bundle(1.0, 1.0, 0.0, 0.0);
    b.pickandsish[1].p = 0.3;
    try {
        product_verdict(b, DetectionConfig{});
        FAIL() << "expected an exception";
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "product check requires at least two distinct p values");
    }
    b.pickandsish.pop_back();
    EXPECT_THROW(product_verdict(b, DetectionConfig{}), std::invalid_argument);
}

TEST(Verdict, SimulatedExamples) {
    const auto g = grid_1000();
    const auto product = compute_traces(simulate(ModelSpec::example1(), 1000, 7), g);
    EXPECT_EQ(product_verdict(product, DetectionConfig{}).verdict, Verdict::CevProduct);
    const auto nonproduct = compute_traces(simulate(ModelSpec::example2(0.5), 1000, 7), g);
    EXPECT_EQ(product_verdict(nonproduct, DetectionConfig{}).verdict, Verdict::CevNonproduct);
}

TEST(Verdict, AdversarialNoiseMakesNoClaim) {
    // every grid point sees a freshly drawn, unrelated value: no trace can settle
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        auto b = constant_bundle(0.0, 0.0, 0.0, 0.0);
        for (std::size_t i = 0; i < b.kgrid.size(); ++i) {
            b.hillish[i] = 1.0 + 2.0 * u(rng);
            b.hillish_neg[i] = 1.0 + 2.0 * u(rng);
            b.kendall[i] = u(rng);
            for (auto& t : b.pickandsish) t.values[i] = 5.0 * u(rng);
        }
        const auto v = product_verdict(b, DetectionConfig{}).verdict;
        EXPECT_TRUE(v == Verdict::NotCev || v == Verdict::Inconclusive) << to_string(v);
    }
}

TEST(Verdict, TighteningNeverCreatesProduct) {
    std::vector<TraceBundle> bundles;
    const auto g = grid_1000();
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        bundles.push_back(compute_traces(simulate(ModelSpec::example1(), 1000, seed), g));
        bundles.push_back(compute_traces(simulate(ModelSpec::example2(0.5), 1000, seed), g));
    }
    for (const auto& b : bundles) {
        DetectionConfig c;
        c.eps_hillish = 1.0;
        c.eps_pickandsish = 2.0;
        bool product_allowed = true;
        for (int step = 0; step < 20; ++step) {
            const auto v = product_verdict(b, c);
            if (v.verdict == Verdict::CevProduct) EXPECT_TRUE(product_allowed);
            else product_allowed = false;
            EXPECT_EQ(product_verdict(b, c).verdict, v.verdict);
            c.eps_hillish *= 0.8;
            c.eps_pickandsish *= 0.8;
        }
    }
}

TEST(Verdict, StringNames) {
    EXPECT_EQ(to_string(Verdict::NotCev), "NOT_CEV");
    EXPECT_EQ(to_string(Verdict::CevProduct), "CEV_PRODUCT");
    EXPECT_EQ(to_string(Verdict::CevNonproduct), "CEV_NONPRODUCT");
    EXPECT_EQ(to_string(Verdict::Inconclusive), "INCONCLUSIVE");
}
