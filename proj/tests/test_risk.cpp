#include <cmath>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "gmmrec/core_model.hpp"
#include "gmmrec/errors.hpp"
#include "gmmrec/risk.hpp"
#include "gmmrec/rng.hpp"

using namespace gmmrec;

TEST(HammingRisk, IdenticalAndNegated) {
    const LabelVector eta({1, -1, -1, 1, 1});
    for (const LabelVector& est : {eta, eta.negated()}) {
        const RiskReport r = hamming_risk(est, eta);
        EXPECT_EQ(r.hamming, 0u);
        EXPECT_TRUE(r.exact);
        EXPECT_EQ(r.normalized, 0.0);
        EXPECT_EQ(r.correlation, 1.0);
    }
}

TEST(HammingRisk, HandEnumeratedFlip) {
    // nu = +1: one mismatch -> 2; nu = -1: two mismatches -> 4.
    const RiskReport r = hamming_risk(LabelVector({1, 1, -1}), LabelVector({1, 1, 1}));
    EXPECT_EQ(r.hamming, 2u);
    EXPECT_DOUBLE_EQ(r.normalized, 1.0 / 3.0);
    EXPECT_FALSE(r.exact);
    EXPECT_DOUBLE_EQ(r.correlation, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.risk_over_n(), 2.0 / 3.0);
}

TEST(HammingRisk, NeverExceedsHalf) {
    CounterRng rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::int8_t> a(11), b(11);
        for (auto& v : a) v = static_cast<std::int8_t>(rng.rademacher());
        for (auto& v : b) v = static_cast<std::int8_t>(rng.rademacher());
        const RiskReport r = hamming_risk(LabelVector(a), LabelVector(b));
        EXPECT_LE(r.normalized, 0.5);
        EXPECT_EQ(r.hamming % 2, 0u);
        EXPECT_NEAR(r.correlation, 1.0 - 2.0 * r.normalized, 1e-15);
    }
}

TEST(HammingRisk, LengthMismatch) {
    EXPECT_THROW(hamming_risk(LabelVector({1, 1}), LabelVector({1, 1, 1})), DimensionError);
}

TEST(Tally, Examples) {
    const RiskReport exact{3, 0, 0.0, true, 1.0};
    const RiskReport miss{3, 2, 1.0 / 3.0, false, 1.0 / 3.0};
    const std::vector<RiskReport> all{exact, exact};
    EXPECT_EQ(tally(all).success_rate, 1.0);
    const std::vector<RiskReport> half{exact, miss};
    EXPECT_EQ(tally(half).success_rate, 0.5);
    const std::vector<RiskReport> mixed{exact, miss, exact};
    const TallySummary s = tally(mixed);
    EXPECT_NEAR(s.mean_normalized, 1.0 / 9.0, 1e-15);
    EXPECT_EQ(s.count, 3u);
    EXPECT_EQ(s.successes, 2u);
}

TEST(Tally, EmptyIsAnError) {
    EXPECT_THROW(tally(std::vector<RiskReport>{}), DomainError);
}

TEST(EstimateG, HugeThresholdGivesOne) {
    CounterRng rng(1);
    const std::vector<double> theta{1.0, 2.0, -1.0};
    EXPECT_EQ(estimate_G(1e9, theta, 1.0, 50, 1000, rng).estimate, 1.0);
}

TEST(EstimateG, VanishingNoiseGivesZero) {
    CounterRng rng(1);
    const std::vector<double> theta{1.0, 2.0, -1.0};
    EXPECT_EQ(estimate_G(0.5, theta, 1e-12, 50, 1000, rng).estimate, 0.0);
}

TEST(EstimateG, GaussianApproximation) {
    const std::size_t p = 1000, n = 500;
    std::vector<double> theta(p, 0.0);
    theta[0] = 2.0;  // ||theta||^2 = 4
    CounterRng rng(2);
    const MonteCarloEstimate g = estimate_G(0.0, theta, 1.0, n, 100'000, rng);
    const double closed = gaussian_tail(4.0 / std::sqrt(4.0 + 1000.0 / 499.0));
    EXPECT_LE(std::abs(g.estimate - closed), std::max(3.0 * g.std_error, 0.2 * closed))
        << g.estimate << " vs " << closed;
    EXPECT_EQ(g.reps, 100'000u);
}

TEST(EstimateG, ThreadCountDoesNotMatter) {
    const std::vector<double> theta(20, 0.3);
    omp_set_num_threads(1);
    CounterRng a(5);
    const MonteCarloEstimate one = estimate_G(0.0, theta, 1.0, 30, 5000, a);
    omp_set_num_threads(4);
    CounterRng b(5);
    const MonteCarloEstimate many = estimate_G(0.0, theta, 1.0, 30, 5000, b);
    EXPECT_EQ(one.estimate, many.estimate);
    EXPECT_EQ(one.std_error, many.std_error);
}

TEST(EstimateG, RejectsBadInput) {
    CounterRng rng(1);
    const std::vector<double> theta{1.0};
    EXPECT_THROW(estimate_G(0.0, theta, 1.0, 50, 99, rng), DomainError);
    EXPECT_THROW(estimate_G(0.0, theta, 1.0, 1, 1000, rng), DomainError);
    EXPECT_THROW(estimate_G(0.0, std::vector<double>{}, 1.0, 50, 1000, rng), DomainError);
}
