#include <cmath>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "gmmrec/eigen.hpp"
#include "gmmrec/errors.hpp"
#include "gmmrec/kernels.hpp"
#include "gmmrec/matrix.hpp"
#include "gmmrec/rng.hpp"
#include "gmmrec/selftest.hpp"
#include "gmmrec/synth.hpp"

using namespace gmmrec;

namespace {

double naive_entry(const Matrix& y, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < y.rows(); ++k) s += y(k, i) * y(k, j);
    return s;
}

}  // namespace

TEST(Gram, IdentityEmbedding) {
    EXPECT_EQ(gram(Matrix::identity(2)).dense(), Matrix::identity(2));
}

TEST(Gram, MatchesTripleLoop) {
    CounterRng rng(4);
    for (auto [p, n] : {std::pair<std::size_t, std::size_t>{7, 5}, {1, 2}, {300, 37}, {1000, 203}, {5, 64}}) {
        const Matrix y = random_matrix(p, n, rng);
        const SymMatrix g = gram(y);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double ref = naive_entry(y, i, j);
                ASSERT_NEAR(g(i, j), ref, 1e-10 * (1.0 + std::abs(ref))) << p << "x" << n;
            }
    }
}

TEST(Gram, ZeroColumnGivesZeroRowAndColumn) {
    CounterRng rng(4);
    Matrix y = random_matrix(6, 5, rng);
    for (std::size_t k = 0; k < 6; ++k) y(k, 2) = 0.0;
    const SymMatrix g = gram(y);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_EQ(g(2, j), 0.0);
        EXPECT_EQ(g(j, 2), 0.0);
    }
}

TEST(Gram, ExactlySymmetric) {
    CounterRng rng(4);
    const SymMatrix g = gram(random_matrix(123, 77, rng));
    for (std::size_t i = 0; i < 77; ++i)
        for (std::size_t j = 0; j < 77; ++j) ASSERT_EQ(g(i, j), g(j, i));
}

TEST(Gram, RejectsDegenerateShapes) {
    EXPECT_THROW(gram(Matrix(3, 1)), DimensionError);
}

TEST(Kernels, ThreadCountDoesNotChangeBits) {
    CounterRng rng(12);
    const std::size_t p = 700, n = 150;
    const Matrix y = random_matrix(p, n, rng);
    std::vector<double> one(n * n), many(n * n);
    omp_set_num_threads(1);
    kernels::gram(y.data(), p, n, one);
    omp_set_num_threads(4);
    kernels::gram(y.data(), p, n, many);
    EXPECT_EQ(one, many);

    const std::size_t big = 1100;
    const SymMatrix s = random_symmetric(big, rng);
    std::vector<double> x(big), a(big), b(big);
    for (double& v : x) v = rng.normal();
    omp_set_num_threads(1);
    kernels::symv(s.dense().data(), big, x, a);
    omp_set_num_threads(3);
    kernels::symv(s.dense().data(), big, x, b);
    EXPECT_EQ(a, b);
}

TEST(Kernels, AgreeWithReference) {
    const PropertyResult r = check_kernels(30, 99);
    EXPECT_TRUE(r.passed) << r.failures << " failures, worst " << r.worst;
}

TEST(Hollow, ZeroesDiagonalOnly) {
    const SymMatrix m = SymMatrix::from_symmetric(Matrix(2, 2, {1.0, 2.0, 2.0, 4.0}));
    EXPECT_EQ(hollow(m).base().dense(), Matrix(2, 2, {0.0, 2.0, 2.0, 0.0}));
}

TEST(Hollow, Idempotent) {
    CounterRng rng(3);
    const HollowGram h = hollow(random_symmetric(9, rng));
    EXPECT_EQ(hollow(h.base()), h);
}

TEST(SymMatrix, FromSymmetricChecks) {
    EXPECT_THROW(SymMatrix::from_symmetric(Matrix(2, 2, {1.0, 2.0, 3.0, 4.0})), DomainError);
    EXPECT_THROW(SymMatrix::from_symmetric(Matrix(2, 3)), DimensionError);
    // The converting constructor symmetrizes instead.
    EXPECT_EQ(SymMatrix(Matrix(2, 2, {1.0, 2.0, 4.0, 4.0}))(0, 1), 3.0);
}

TEST(MatvecHollow, ZeroMatrixGivesZero) {
    const HollowGram h = hollow(SymMatrix(5));
    const std::vector<double> x{1, 2, 3, 4, 5};
    for (double v : matvec_hollow(h, x)) EXPECT_EQ(v, 0.0);
}

TEST(MatvecHollow, MatchesNaiveLoop) {
    CounterRng rng(31);
    for (std::size_t n : {2u, 17u, 64u, 1030u}) {
        const HollowGram h = hollow(random_symmetric(n, rng));
        std::vector<double> x(n);
        for (double& v : x) v = rng.normal();
        const auto got = matvec_hollow(h, x);
        for (std::size_t i = 0; i < n; ++i) {
            double ref = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) ref += h(i, j) * x[j];
            ASSERT_NEAR(got[i], ref, 1e-12 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(MatvecHollow, RejectsWrongLength) {
    const HollowGram h = hollow(SymMatrix(3));
    EXPECT_THROW(matvec_hollow(h, std::vector<double>{1.0, 2.0}), DimensionError);
}

TEST(TopEigpair, HollowSpike) {
    const std::vector<std::int8_t> eta_entries{1, -1, -1, 1, 1, -1};
    const LabelVector eta(eta_entries);
    Matrix outer(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) outer(i, j) = eta[i] * eta[j];
    const HollowGram h = hollow(SymMatrix::from_symmetric(outer));
    CounterRng rng(1);
    const EigenPair pair = top_eigpair(h, rng);
    EXPECT_NEAR(pair.lambda, 5.0, 1e-9);
    EXPECT_LE(pair.residual, 1e-10 * (std::abs(pair.lambda) + pair.shift));
    const double sign = pair.vector[0] > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(sign * pair.vector[i], eta[i] / std::sqrt(6.0), 1e-9);
}

TEST(TopEigpair, LargestAlgebraicNotLargestMagnitude) {
    Matrix d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = -7.0;
    CounterRng rng(2);
    const EigenPair pair = top_eigpair(SymMatrix::from_symmetric(d), rng);
    EXPECT_NEAR(pair.lambda, 3.0, 1e-9);
    EXPECT_NEAR(pair.vector[0], 1.0, 1e-9);
    EXPECT_NEAR(pair.vector[1], 0.0, 1e-5);
    EXPECT_NEAR(pair.vector[2], 0.0, 1e-5);
}

TEST(TopEigpair, SignConventionLargestEntryPositive) {
    CounterRng rng(5);
    const SymMatrix s = random_symmetric(20, rng);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        CounterRng start(seed);
        const EigenPair pair = top_eigpair(s, start, {1e-10, 2'000'000});
        std::size_t arg = 0;
        for (std::size_t i = 1; i < 20; ++i)
            if (std::abs(pair.vector[i]) > std::abs(pair.vector[arg])) arg = i;
        EXPECT_GT(pair.vector[arg], 0.0);
    }
}

TEST(TopEigpair, AgreesWithJacobiOnRandom32) {
    CounterRng rng(32);
    const SymMatrix s = random_symmetric(32, rng);
    const Spectrum oracle = jacobi_eig(s);
    CounterRng start(7);
    const EigenPair pair = top_eigpair(s, start, {1e-10, 2'000'000});
    double overlap = 0.0;
    for (std::size_t i = 0; i < 32; ++i) overlap += pair.vector[i] * oracle.vectors(i, 0);
    EXPECT_GE(std::abs(overlap), 1.0 - 1e-8);
    EXPECT_LE(std::abs(pair.lambda - oracle.values[0]), 1e-8 * (1.0 + std::abs(oracle.values[0])));
}

TEST(TopEigpair, ThrowsWhenIterationBudgetRunsOut) {
    CounterRng rng(32);
    const SymMatrix s = random_symmetric(32, rng);
    CounterRng start(7);
    try {
        top_eigpair(s, start, {1e-14, 3});
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.last_residual(), 0.0);
    }
}

TEST(TopEigpair, RepeatedTopEigenvalue) {
    // Two equal top eigenvalues: any unit vector of the top eigenspace is valid.
    Matrix d(4, 4);
    d(0, 0) = 2.0;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    d(3, 3) = -1.0;
    CounterRng rng(2);
    const EigenPair pair = top_eigpair(SymMatrix::from_symmetric(d), rng);
    EXPECT_NEAR(pair.lambda, 2.0, 1e-9);
    EXPECT_NEAR(pair.vector[0] * pair.vector[0] + pair.vector[1] * pair.vector[1], 1.0, 1e-9);
}

TEST(TopEigpair, ZeroMatrix) {
    CounterRng rng(2);
    const EigenPair pair = top_eigpair(hollow(SymMatrix(4)), rng);
    EXPECT_EQ(pair.lambda, 0.0);
    EXPECT_NEAR(norm2(pair.vector), 1.0, 1e-12);
}

TEST(EigensolverProperty, AgreesWithJacobi) {
    const PropertyResult r = check_eigensolver(30, 40, 123);
    EXPECT_TRUE(r.passed) << r.failures << " failures, worst " << r.worst;
}

TEST(Jacobi, Identity) {
    const Spectrum s = jacobi_eig(SymMatrix::from_symmetric(Matrix::identity(3)));
    for (double v : s.values) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Jacobi, TwoByTwoSwap) {
    const Spectrum s = jacobi_eig(SymMatrix::from_symmetric(Matrix(2, 2, {0.0, 1.0, 1.0, 0.0})));
    EXPECT_NEAR(s.values[0], 1.0, 1e-15);
    EXPECT_NEAR(s.values[1], -1.0, 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.vectors(0, 0)), r, 1e-15);
    EXPECT_NEAR(s.vectors(0, 0) * s.vectors(1, 0), 0.5, 1e-15);
    EXPECT_NEAR(s.vectors(0, 1) * s.vectors(1, 1), -0.5, 1e-15);
}

TEST(Jacobi, ReconstructsRandom16) {
    CounterRng rng(16);
    const SymMatrix s = random_symmetric(16, rng);
    const Spectrum sp = jacobi_eig(s);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k < 16; ++k) v += sp.vectors(i, k) * sp.values[k] * sp.vectors(j, k);
            err += (v - s(i, j)) * (v - s(i, j));
            ref += s(i, j) * s(i, j);
        }
    EXPECT_LE(std::sqrt(err), 1e-11 * std::sqrt(ref));
    for (std::size_t k = 1; k < 16; ++k) EXPECT_GE(sp.values[k - 1], sp.values[k]);
}

TEST(Jacobi, RefusesLargeInput) {
    EXPECT_THROW(jacobi_eig(SymMatrix(kOracleMaxOrder + 1)), DimensionError);
}

TEST(OpNorm, Identity) {
    EXPECT_NEAR(op_norm_oracle(Matrix::identity(5)), 1.0, 1e-14);
}

TEST(OpNorm, RankOne) {
    const std::vector<double> u{1.0, -2.0, 0.5}, v{3.0, 1.0, 0.0, -1.0};
    Matrix m(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = u[i] * v[j];
    EXPECT_NEAR(op_norm_oracle(m), norm2(u) * norm2(v), 1e-10);
}

TEST(OpNorm, BoundsColumnNorms) {
    CounterRng rng(8);
    const Matrix m = random_matrix(8, 8, rng);
    const double op = op_norm_oracle(m);
    for (std::size_t j = 0; j < 8; ++j) EXPECT_GE(op + 1e-12, norm2(m.column(j)));
}

TEST(MatrixInequalities, HollowNormBound) {
    EXPECT_TRUE(check_hollow_norm_bound(200, 1).passed);
}

TEST(MatrixInequalities, HollowCenteredBound) {
    EXPECT_TRUE(check_hollow_centered_bound(100, 2).passed);
}

TEST(MatrixInequalities, SpikeNorm) {
    EXPECT_TRUE(check_spike_norm(40, 3).passed);
}

TEST(MatrixInequalities, RoundingBound) {
    EXPECT_TRUE(check_rounding_bound(200, 4).passed);
}
