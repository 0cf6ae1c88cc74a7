#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "gmmrec/labels.hpp"
#include "gmmrec/matrix.hpp"
#include "gmmrec/rng.hpp"

namespace gmmrec {

/// Result of one randomized property check.
struct PropertyResult {
    std::string name;
    bool passed = false;
    std::size_t cases = 0;
    std::size_t failures = 0;
    /// Largest violation seen (property-specific units; <= 0 means none).
    double worst = 0.0;
};

/// Random symmetric matrix with N(0, 1) entries on and above the diagonal.
SymMatrix random_symmetric(std::size_t n, CounterRng& rng);
Matrix random_matrix(std::size_t rows, std::size_t cols, CounterRng& rng);

/// oracle_supervised(Y, eta) == sign(H(Y^T Y) eta), entry for entry.
PropertyResult check_oracle_identity(std::size_t cases, std::uint64_t seed);
/// ||H(A)||op <= 2 ||A||op + 1e-9 for random symmetric A, n <= 16.
PropertyResult check_hollow_norm_bound(std::size_t cases, std::uint64_t seed);
/// ||H(W^T W)||op <= 2 ||W^T W - p sigma^2 I||op + 1e-9.
PropertyResult check_hollow_centered_bound(std::size_t cases, std::uint64_t seed);
/// ||H(eta eta^T)||op = n - 1 within 1e-9 for n = 2..max_n.
PropertyResult check_spike_norm(std::size_t max_n, std::uint64_t seed);
/// (1/n) sum |x_j - sign(y_j)| <= 2 ||x / sqrt(n) - y||^2 + 1e-12.
PropertyResult check_rounding_bound(std::size_t cases, std::uint64_t seed);
/// Power iteration vs Jacobi on random symmetric matrices of order 2..max_n.
PropertyResult check_eigensolver(std::size_t cases, std::size_t max_n, std::uint64_t seed);
/// Blocked Gram and symv kernels vs the serial reference.
PropertyResult check_kernels(std::size_t cases, std::uint64_t seed);

/// Runs every check at a size that finishes in a few seconds; one line per check.
bool run_selftest(std::ostream& out, std::uint64_t seed = 20240601);

}  // namespace gmmrec
