#pragma once

#include <cstddef>
#include <vector>

#include "gmmrec/matrix.hpp"
#include "gmmrec/rng.hpp"

namespace gmmrec {

struct PowerOptions {
    double tol = 1e-10;
    /// 0 selects the default of 100 * n.
    std::size_t max_iter = 0;
};

struct EigenPair {
    double lambda = 0.0;
    std::vector<double> vector;  ///< unit norm, largest-magnitude entry positive
    double residual = 0.0;       ///< ||S v - lambda v||_2 at exit
    double shift = 0.0;          ///< Gershgorin shift max_i sum_j |S_ij|
    std::size_t iterations = 0;
    double gap_estimate = 0.0;   ///< lambda_1 - lambda_2 estimated from the residual decay
    bool gap_warning = false;
};

/// Largest algebraic eigenvalue of S and its eigenvector.
///
/// Power iteration on S + s I with s = max_i sum_j |S_ij|, which makes the
/// shifted matrix positive semidefinite so the dominant eigenvalue of the
/// shifted matrix is lambda_max(S) + s. The start vector is a normalized
/// standard-normal draw from `rng`. Stops when ||S v - lambda v|| <=
/// tol (|lambda| + s); throws ConvergenceError after max_iter iterations.
///
/// The spectral gap is estimated from the geometric decay rate rho of the
/// residual over the last iterations, gap ~ (lambda + s)(1 - rho). When the
/// estimate falls below sqrt(tol) (|lambda| + s) the pair is still returned
/// with gap_warning set.
EigenPair top_eigpair(const SymMatrix& s, CounterRng& rng, const PowerOptions& options = {});
EigenPair top_eigpair(const HollowGram& h, CounterRng& rng, const PowerOptions& options = {});

struct Spectrum {
    std::vector<double> values;  ///< descending
    Matrix vectors;              ///< column k is the eigenvector of values[k]
    std::size_t sweeps = 0;
};

/// Test oracle: cyclic Jacobi rotations until the off-diagonal Frobenius norm
/// is at most 1e-13 ||S||_F. Refuses n > 256.
Spectrum jacobi_eig(const SymMatrix& s);

inline constexpr std::size_t kOracleMaxOrder = 256;

/// Largest singular value via jacobi_eig on the smaller of M^T M and M M^T.
double op_norm_oracle(const Matrix& m);

}  // namespace gmmrec
