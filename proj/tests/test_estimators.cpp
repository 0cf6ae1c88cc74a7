#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "gmmrec/core_model.hpp"
#include "gmmrec/errors.hpp"
#include "gmmrec/estimators.hpp"
#include "gmmrec/risk.hpp"
#include "gmmrec/selftest.hpp"
#include "gmmrec/synth.hpp"

using namespace gmmrec;

namespace {

HollowGram spike(const LabelVector& eta) {
    const std::size_t n = eta.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = eta[i] * eta[j];
    return hollow(SymMatrix::from_symmetric(std::move(m)));
}

Dataset at_snr(double r, std::int64_t n, std::int64_t p, std::uint64_t seed) {
    return sample_dataset({n, p, 1.0, delta_for_snr(r, n, p, 1.0)}, CenterMode::fixed_norm(), seed);
}

}  // namespace

TEST(SignVec, ZeroMapsToPlusOne) {
    EXPECT_EQ(sign_vec(std::vector<double>{2.0, -3.0, 0.0}), LabelVector({1, -1, 1}));
    EXPECT_EQ(sign_vec(std::vector<double>{-0.0, -1e-300}), LabelVector({1, -1}));
}

TEST(SignVec, NegationFlipsWhenNoZeros) {
    const std::vector<double> x{0.5, -2.0, 7.0, -1e-9};
    std::vector<double> neg(x.size());
    std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
    EXPECT_EQ(sign_vec(neg), sign_vec(x).negated());
}

TEST(SignVec, AllNegative) {
    EXPECT_EQ(sign_vec(std::vector<double>{-1.0, -2.0, -3.0}), LabelVector({-1, -1, -1}));
}

TEST(DefaultIterCount, Examples) {
    EXPECT_EQ(default_iter_count(500), 18u);
    EXPECT_EQ(default_iter_count(3), 3u);
    EXPECT_EQ(default_iter_count(2), 2u);
    EXPECT_EQ(default_iter_count(200), 15u);
}

TEST(LloydSteps, ZeroStepsReturnsStart) {
    const LabelVector start({1, -1, 1, 1});
    const EstimateTrace t = lloyd_steps(spike(LabelVector({1, 1, -1, -1})), start, 0);
    EXPECT_EQ(t.labels, start);
    EXPECT_EQ(t.iterations_run, 0u);
    EXPECT_FALSE(t.converged_at.has_value());
}

TEST(LloydSteps, HandWorkedSpikeExample) {
    // eta = (+1, +1, -1, -1), start = (+1, -1, -1, -1), start . eta = 2.
    // H(eta eta^T) start = (start . eta) eta - start (since eta_i^2 = 1):
    //   2 (1, 1, -1, -1) - (1, -1, -1, -1) = (1, 3, -1, -1) -> sign = eta.
    // The second evaluation reproduces eta, so converged_at = 2.
    const LabelVector eta({1, 1, -1, -1});
    const LabelVector start({1, -1, -1, -1});
    const HollowGram h = spike(eta);
    EXPECT_EQ(matvec_hollow(h, start.as_doubles()), (std::vector<double>{1.0, 3.0, -1.0, -1.0}));
    const EstimateTrace t = lloyd_steps(h, start, 2);
    EXPECT_EQ(t.labels, eta);
    ASSERT_TRUE(t.converged_at.has_value());
    EXPECT_EQ(*t.converged_at, 2u);
    EXPECT_EQ(t.iterations_run, 2u);
}

TEST(LloydSteps, FixedPointStopsAtFirstEvaluation) {
    const LabelVector eta({1, -1, 1, 1, -1});
    const EstimateTrace t = lloyd_steps(spike(eta), eta, 10);
    EXPECT_EQ(t.labels, eta);
    ASSERT_TRUE(t.converged_at.has_value());
    EXPECT_EQ(*t.converged_at, 1u);
    EXPECT_EQ(t.iterations_run, 1u);
}

TEST(LloydSteps, RejectsSizeMismatch) {
    EXPECT_THROW(lloyd_steps(spike(LabelVector({1, -1, 1})), LabelVector({1, -1}), 3), DimensionError);
}

TEST(SpectralInit, NoiselessRecovery) {
    const Dataset d = sample_dataset({100, 50, 0.0, 3.0}, CenterMode::fixed_norm(), 4);
    CounterRng rng(1);
    const EstimateTrace t = spectral_init(hollow(gram(d.y)), rng);
    EXPECT_TRUE(hamming_risk(t.labels, d.eta).exact);
    EXPECT_EQ(t.iterations_run, 0u);
}

TEST(SpectralInit, HighSnrSingleDraw) {
    const Dataset d = at_snr(6.0, 300, 100, 2024);
    CounterRng rng(3);
    const EstimateTrace t = spectral_init(hollow(gram(d.y)), rng);
    EXPECT_LE(hamming_risk(t.labels, d.eta).normalized, 0.02);
}

TEST(SpectralInit, PermutationEquivariant) {
    const Dataset d = at_snr(3.0, 80, 60, 77);
    std::vector<std::size_t> perm(80);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng shuffle(5);
    for (std::size_t i = 79; i > 0; --i) std::swap(perm[i], perm[shuffle.next_u64() % (i + 1)]);
    Matrix permuted(d.p(), d.n());
    for (std::size_t k = 0; k < d.p(); ++k)
        for (std::size_t i = 0; i < d.n(); ++i) permuted(k, i) = d.y(k, perm[i]);

    CounterRng r1(9), r2(9);
    const LabelVector a = spectral_init(hollow(gram(d.y)), r1).labels;
    const LabelVector b = spectral_init(hollow(gram(permuted)), r2).labels;
    for (std::size_t i = 0; i < 80; ++i) EXPECT_EQ(b[i], a[perm[i]]) << i;
}

TEST(SpectralLloyd, NoiselessConvergesImmediately) {
    const Dataset d = sample_dataset({60, 20, 0.0, 2.0}, CenterMode::fixed_norm(), 12);
    CounterRng rng(1);
    const EstimateTrace t = spectral_lloyd(d.y, rng);
    EXPECT_TRUE(hamming_risk(t.labels, d.eta).exact);
    ASSERT_TRUE(t.converged_at.has_value());
    EXPECT_LE(*t.converged_at, 1u);
}

TEST(SpectralLloyd, SolverStartDoesNotMatter) {
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Dataset d = at_snr(2.5, 100, 150, 1000 + seed);
        const HollowGram h = hollow(gram(d.y));
        CounterRng r1(seed * 2 + 1), r2(seed * 2 + 2);
        const EstimateTrace a = spectral_lloyd(h, r1);
        const EstimateTrace b = spectral_lloyd(h, r2);
        if (a.eigen_gap_warning || b.eigen_gap_warning) continue;
        ++compared;
        EXPECT_EQ(a.labels, b.labels) << "instance " << seed;
    }
    EXPECT_GE(compared, 90u);
}

TEST(SpectralLloyd, MatrixAndGramOverloadsAgree) {
    const Dataset d = at_snr(3.0, 90, 70, 5);
    CounterRng r1(4), r2(4);
    EXPECT_EQ(spectral_lloyd(d.y, r1).labels, spectral_lloyd(hollow(gram(d.y)), r2).labels);
}

TEST(SpectralLloyd, IterationBudget) {
    const Dataset d = at_snr(1.0, 120, 400, 8);
    CounterRng rng(2);
    EXPECT_LE(spectral_lloyd(d.y, rng).iterations_run, default_iter_count(120));
}

TEST(RandomLloyd, ZeroStepsReturnsRandomStart) {
    const Dataset d = at_snr(3.0, 50, 20, 6);
    CounterRng a(10), b(10);
    const EstimateTrace t = random_lloyd(d.y, a, 0);
    EXPECT_EQ(t.labels, sample_labels(50, b));
    EXPECT_EQ(t.iterations_run, 0u);
}

TEST(RandomLloyd, Deterministic) {
    const Dataset d = at_snr(3.0, 50, 20, 6);
    CounterRng a(10), b(10);
    EXPECT_EQ(random_lloyd(d.y, a).labels, random_lloyd(d.y, b).labels);
}

TEST(RandomLloyd, NoiselessDiagnostic) {
    // The random start has start . eta = 0 with positive probability (n even);
    // no recovery rate is required, only that the tally is well defined.
    std::size_t exact = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Dataset d = sample_dataset({50, 10, 0.0, 2.0}, CenterMode::fixed_norm(), seed);
        CounterRng rng(derive_seed(seed, 2, 0));
        exact += hamming_risk(random_lloyd(d.y, rng).labels, d.eta).exact ? 1 : 0;
    }
    EXPECT_LE(exact, 100u);
    EXPECT_GT(exact, 50u);
}

TEST(OracleSupervised, NoiselessIsExact) {
    const Dataset d = sample_dataset({7, 3, 0.0, 1.0}, CenterMode::fixed_norm(), 3);
    EXPECT_EQ(oracle_supervised(d.y, d.eta), d.eta);
}

TEST(OracleSupervised, GramIdentity) {
    const PropertyResult r = check_oracle_identity(100, 55);
    EXPECT_TRUE(r.passed) << r.failures << " mismatching instances";
}

TEST(OracleSupervised, MatchesMonteCarloPrediction) {
    const std::int64_t n = 500, p = 1000;
    const double delta = delta_for_snr(2.0, n, p, 1.0);
    const std::size_t reps = 200;
    std::vector<double> fracs;
    for (std::size_t r = 0; r < reps; ++r) {
        const Dataset d = sample_dataset({n, p, 1.0, delta}, CenterMode::fixed_norm(), derive_seed(31, 0, r));
        const LabelVector est = oracle_supervised(d.y, d.eta);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < d.n(); ++i) wrong += est[i] != d.eta[i] ? 1 : 0;
        fracs.push_back(static_cast<double>(wrong) / n);
    }
    const double mean = std::accumulate(fracs.begin(), fracs.end(), 0.0) / reps;
    double var = 0.0;
    for (double f : fracs) var += (f - mean) * (f - mean);
    const double se = std::sqrt(var / (reps - 1) / reps);

    std::vector<double> theta(p, 0.0);
    theta[0] = delta;
    CounterRng rng(8);
    const MonteCarloEstimate g = estimate_G(0.0, theta, 1.0, n, 100'000, rng);
    EXPECT_LE(std::abs(mean - g.estimate), 3.0 * std::hypot(se, g.std_error))
        << "mean " << mean << " G " << g.estimate;
}

TEST(OracleKnownCenter, NoiselessAndScaleInvariant) {
    const Dataset d = sample_dataset({9, 4, 0.0, 1.0}, CenterMode::fixed_norm(), 3);
    EXPECT_EQ(oracle_known_center(d.y, d.theta), d.eta);
    const Dataset noisy = at_snr(1.5, 40, 30, 4);
    std::vector<double> doubled = noisy.theta;
    for (double& v : doubled) v *= 2.0;
    EXPECT_EQ(oracle_known_center(noisy.y, noisy.theta), oracle_known_center(noisy.y, doubled));
}

TEST(OracleKnownCenter, RejectsZeroCenter) {
    const Dataset d = at_snr(1.5, 10, 3, 4);
    EXPECT_THROW(oracle_known_center(d.y, std::vector<double>(3, 0.0)), DomainError);
    EXPECT_THROW(oracle_known_center(d.y, std::vector<double>(2, 1.0)), DimensionError);
}

TEST(Methods, NamesRoundTrip) {
    for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_THROW(parse_method("kmeans"), DomainError);
}
