#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gmmrec/core_model.hpp"
#include "gmmrec/errors.hpp"

using namespace gmmrec;

// Upper-tail values from adaptive quadrature of the normal density at 30
// significant digits (mpmath), frozen here.
constexpr double kTail1 = 0.15865525393145705141;
constexpr double kTailMinus3 = 0.99865010196836990547;
constexpr double kTail2 = 0.0227501319481792072;
constexpr double kTail4 = 0.000031671241833119921254;
constexpr double kTail8 = 6.2209605742717841235e-16;

TEST(Snr, SmallDimensionReducesToDeltaOverSigma) {
    EXPECT_NEAR(snr({1'000'000'000, 1, 1.0, 2.0}), 2.0, 1e-6);
}

TEST(Snr, DirectEvaluation) {
    EXPECT_NEAR(snr({100, 1200, 1.0, 2.0}), 1.0, 1e-15);
}

TEST(Snr, AtThresholdSquaresToTwoLogN) {
    const double delta = exact_threshold(500, 3107, 1.0);
    const double r = snr({500, 3107, 1.0, delta});
    EXPECT_NEAR(r * r, 2.0 * std::log(500.0), 1e-9);
}

TEST(Snr, RejectsInvalidConfig) {
    EXPECT_THROW(snr({1, 10, 1.0, 1.0}), DomainError);
    EXPECT_THROW(snr({10, 0, 1.0, 1.0}), DomainError);
    EXPECT_THROW(snr({10, 10, 0.0, 1.0}), DomainError);
    EXPECT_THROW(snr({10, 10, 1.0, 0.0}), DomainError);
}

TEST(ExactThreshold, CriticalDimension) {
    const std::int64_t n = 1000;
    const auto p = static_cast<std::int64_t>(std::llround(n * std::log(static_cast<double>(n))));
    const double d = exact_threshold(n, p, 1.0);
    // p is rounded, so the identity holds up to the rounding of p.
    EXPECT_NEAR(d * d, (1.0 + std::sqrt(3.0)) * std::log(1000.0), 1e-3);
}

TEST(ExactThreshold, LowDimensionRegime) {
    const double d = exact_threshold(1'000'000, 1, 1.0);
    const double target = 2.0 * std::log(1e6);
    EXPECT_LE(std::abs(d * d - target) / target, 1e-3);
}

TEST(ExactThreshold, HighDimensionRegime) {
    const std::int64_t n = 1000;
    const double logn = std::log(static_cast<double>(n));
    const auto p = static_cast<std::int64_t>(std::llround(1e4 * n * logn));
    const double d = exact_threshold(n, p, 1.0);
    const double target = std::sqrt(2.0 * static_cast<double>(p) * logn / n);
    EXPECT_LE(std::abs(d * d - target) / target, 1e-2);
}

TEST(ExactThreshold, ScalesWithSigma) {
    EXPECT_NEAR(exact_threshold(500, 3107, 2.5), 2.5 * exact_threshold(500, 3107, 1.0), 1e-12);
}

TEST(ExactThreshold, NeedsThreeObservations) {
    EXPECT_THROW(exact_threshold(2, 10, 1.0), DomainError);
}

TEST(DeltaForSnr, InvertsSnr) {
    for (double r : {0.1, 1.0, 2.0, 4.0, 8.0, 30.0}) {
        for (std::int64_t p : {1, 600, 100000}) {
            const double delta = delta_for_snr(r, 300, p, 1.7);
            EXPECT_NEAR(snr({300, p, 1.7, delta}), r, 1e-9 * r) << "r=" << r << " p=" << p;
        }
    }
}

TEST(AbToConfig, UnitAGivesTwoLogN) {
    const ProblemConfig c = ab_to_config({1.0, 0.7}, 500);
    EXPECT_NEAR(c.delta * c.delta, 2.0 * std::log(500.0), 1e-12);
    EXPECT_NEAR(c.delta * c.delta, 12.4292, 1e-4);
}

TEST(AbToConfig, FourOneAtFiveHundred) {
    const ProblemConfig c = ab_to_config({4.0, 1.0}, 500);
    EXPECT_EQ(c.p, 3107);
    EXPECT_EQ(c.n, 500);
    EXPECT_NEAR(c.delta * c.delta, 3.0 * std::log(500.0), 1e-12);
}

TEST(AbToConfig, ThresholdCurveMatchesExactThreshold) {
    const ProblemConfig c = ab_to_config({threshold_a(1.0), 1.0}, 500);
    const double bar = exact_threshold(500, c.p, 1.0);
    EXPECT_LE(std::abs(c.delta - bar) / bar, 0.02);
}

TEST(AbToConfig, DimensionFloorIsOne) {
    EXPECT_EQ(ab_to_config({2.0, 1e-9}, 10).p, 1);
}

TEST(AbToConfig, RejectsBadPoints) {
    EXPECT_THROW(ab_to_config({-0.5, 1.0}, 100), DomainError);
    EXPECT_THROW(ab_to_config({1.0, -1.0}, 100), DomainError);
    EXPECT_THROW(ab_to_config({1.0, 1.0}, 1), DomainError);
}

TEST(ThresholdA, Examples) {
    EXPECT_DOUBLE_EQ(threshold_a(0.0), 1.0);
    EXPECT_DOUBLE_EQ(threshold_a(1.0), 3.0);
    EXPECT_DOUBLE_EQ(threshold_a(5.0), 11.0);
}

TEST(CriticalDimension, IsNLogN) {
    EXPECT_NEAR(critical_dimension(500), 500.0 * std::log(500.0), 1e-9);
}

TEST(GaussianTail, QuadratureOracle) {
    EXPECT_EQ(gaussian_tail(0.0), 0.5);
    EXPECT_NEAR(gaussian_tail(1.0), kTail1, 1e-15);
    EXPECT_NEAR(gaussian_tail(-3.0), kTailMinus3, 1e-15);
    EXPECT_NEAR(gaussian_tail(2.0), kTail2, 1e-16);
    EXPECT_NEAR(gaussian_tail(4.0) / kTail4, 1.0, 1e-13);
    EXPECT_NEAR(gaussian_tail(8.0) / kTail8, 1.0, 1e-12);
}

TEST(GaussianTail, LimitsAndMonotonicity) {
    EXPECT_EQ(gaussian_tail(std::numeric_limits<double>::infinity()), 0.0);
    EXPECT_EQ(gaussian_tail(-std::numeric_limits<double>::infinity()), 1.0);
    double prev = 1.0;
    for (double t = -8.0; t <= 8.0; t += 0.25) {
        const double v = gaussian_tail(t);
        EXPECT_LE(v, prev);
        EXPECT_NEAR(v + gaussian_tail(-t), 1.0, 1e-15);
        prev = v;
    }
}

TEST(LowerBoundCurve, Examples) {
    // delta -> 0 drives the SNR to 0.
    EXPECT_NEAR(lower_bound_curve({300, 600, 1.0, 1e-9}), 0.5, 1e-12);
    EXPECT_NEAR(lower_bound_curve({300, 600, 1.0, delta_for_snr(1.0, 300, 600, 1.0)}), kTail1, 1e-9);
    EXPECT_NEAR(lower_bound_curve({300, 600, 1.0, delta_for_snr(4.0, 300, 600, 1.0)}), 3.167e-5, 1e-8);
}
