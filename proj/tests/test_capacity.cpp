#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "kuramem/capacity.hpp"
#include "kuramem/memory.hpp"

using namespace kuramem;

namespace {

// Wilson interval from its defining quadratic: the set of p with
// (phat - p)^2 <= z^2 p (1 - p) / n.
Interval wilson_by_quadratic(double hits, double n, double z) {
    const double phat = hits / n;
    const double a = 1 + z * z / n;
    const double b = -(2 * phat + z * z / n);
    const double c = phat * phat;
    const double disc = std::sqrt(std::max(0.0, b * b - 4 * a * c));
    return {(-b - disc) / (2 * a), (-b + disc) / (2 * a)};
}

} // namespace

TEST(Wilson, MatchesQuadraticRoots) {
    for (std::uint64_t n : {1u, 7u, 50u, 500u}) {
        for (std::uint64_t h = 0; h <= n; h += std::max<std::uint64_t>(1, n / 7)) {
            const auto w = wilson_interval(h, n);
            const auto q = wilson_by_quadratic(static_cast<double>(h), static_cast<double>(n), z95);
            EXPECT_NEAR(w.low, std::max(0.0, q.low), 1e-12);
            EXPECT_NEAR(w.high, std::min(1.0, q.high), 1e-12);
            const double p = static_cast<double>(h) / static_cast<double>(n);
            EXPECT_LE(w.low, p);
            EXPECT_GE(w.high, p);
        }
    }
    EXPECT_THROW(wilson_interval(3, 2), DomainError);
    EXPECT_THROW(wilson_interval(0, 0), DomainError);
}

TEST(Wilson, ReferenceValue) {
    // 8 successes out of 10: Wilson 95% interval [0.4902, 0.9433].
    const auto w = wilson_interval(8, 10);
    EXPECT_NEAR(w.low, 0.4901625, 1e-6);
    EXPECT_NEAR(w.high, 0.9433178, 1e-6);
}

TEST(CountExact, Honeycombs) {
    for (int m : {1, 2, 3}) {
        const auto c = count_exact(build_honeycomb(5, m));
        ASSERT_TRUE(c.exact.has_value());
        EXPECT_EQ(*c.exact, num_patterns(5, m));
        EXPECT_EQ(c.ci_low, c.ci_high);
        EXPECT_EQ(c.ci_low, static_cast<double>(*c.exact));
    }
    EXPECT_EQ(*count_exact(build_honeycomb(9, 2)).exact, num_patterns(9, 2));
}

TEST(CountExact, ArraysAndSingleHexagon) {
    EXPECT_EQ(*count_exact(build_tri_array(2, 2)).exact, 1u);
    EXPECT_EQ(*count_exact(build_square_array(2, 2)).exact, 1u);
    EXPECT_EQ(*count_exact(build_hex_array(1, 1)).exact, 3u);
}

TEST(SampleEstimate, DegenerateBox) {
    const auto c = sample_estimate(build_square_array(3, 3), 20, 1);
    EXPECT_EQ(c.box_size, 1.0);
    EXPECT_EQ(*c.estimate, 1.0);
    EXPECT_EQ(c.hits, 20u);
}

TEST(SampleEstimate, InvariantsAndDeterminism) {
    const auto g = build_hex_array(2, 2);
    const auto a = sample_estimate(g, 200, 5);
    const auto b = sample_estimate(g, 200, 5);
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(*a.estimate, a.box_size * static_cast<double>(a.hits) / 200.0);
    EXPECT_LE(a.ci_low, *a.estimate);
    EXPECT_GE(a.ci_high, *a.estimate);
    EXPECT_GE(a.ci_low, 0.0);
    EXPECT_LE(a.ci_high, a.box_size);
    EnumerateOptions threaded;
    threaded.jobs = 3;
    EXPECT_EQ(sample_estimate(g, 200, 5, threaded).hits, a.hits);
    EXPECT_THROW(sample_estimate(g, 0, 5), DomainError);
}

TEST(SampleEstimate, TenfoldSamplingCoversExact) {
    for (const auto& g : {build_hex_array(2, 2), build_hex_array(1, 3), build_honeycomb(5, 2)}) {
        const auto exact = static_cast<double>(*count_exact(g).exact);
        const auto box = box_size(g);
        const auto s = sample_estimate(g, box * 10, 123);
        EXPECT_LE(std::abs(*s.estimate - exact), 0.5 * (s.ci_high - s.ci_low) + 1e-9);
    }
}

TEST(SampleEstimate, CoverageOnSmallGraphs) {
    // 95% Wilson intervals should cover the exact count in most seeded runs.
    for (const auto& g : {build_hex_array(1, 2), build_hex_array(2, 2)}) {
        const auto exact = static_cast<double>(*count_exact(g).exact);
        int covered = 0;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const auto s = sample_estimate(g, 100, seed);
            covered += (s.ci_low <= exact && exact <= s.ci_high);
        }
        EXPECT_GE(covered, 34);
    }
}

TEST(Experiment, HoneycombSweepCounts) {
    ExperimentConfig cfg;
    cfg.families.push_back({Topology::honeycomb, {{5, 1}, {5, 2}, {5, 3}, {5, 4}, {5, 5}}});
    cfg.families.push_back({Topology::honeycomb, {{9, 1}, {9, 2}}});
    cfg.families.push_back({Topology::honeycomb, {{4, 1}}});
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 8u);
    const std::uint64_t want[] = {3, 9, 27, 81, 243, 5, 25};
    const int nodes[] = {5, 9, 13, 17, 21, 9, 17};
    for (int i = 0; i < 7; ++i) {
        EXPECT_EQ(rows[i].mode, "exact");
        EXPECT_EQ(*rows[i].result.exact, want[i]);
        EXPECT_EQ(rows[i].n_nodes, nodes[i]);
    }
    EXPECT_EQ(rows[7].mode, "error");
    EXPECT_FALSE(rows[7].error.empty());
    // Matched node count n = 9: pentagonal beats nonagonal.
    EXPECT_GE(*rows[1].result.exact, *rows[5].result.exact);
}

TEST(Experiment, SampledRowsBeyondThreshold) {
    ExperimentConfig cfg;
    cfg.exact_threshold = 10;
    cfg.samples = 60;
    cfg.seed = 4;
    cfg.families.push_back({Topology::hex_array, {{1, 1}, {2, 2}}});
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].mode, "exact");
    EXPECT_EQ(rows[1].mode, "sampled");
    EXPECT_EQ(rows[1].result.samples, 60u);
    EXPECT_EQ(rows[1].result.seed, mix_seed(4, 1));
    EXPECT_EQ(run_experiment(cfg)[1].result.hits, rows[1].result.hits);
}
