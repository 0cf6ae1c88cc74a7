#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gmmrec/labels.hpp"
#include "gmmrec/rng.hpp"

namespace gmmrec {

/// Sign-invariant label loss.
///   hamming     = min over nu in {-1, 1} of sum_j |est_j - nu truth_j|   (each mismatch counts 2)
///   normalized  = hamming / (2n), the misclassified fraction
///   correlation = |truth . est| / n = 1 - 2 normalized
struct RiskReport {
    std::size_t n = 0;
    std::size_t hamming = 0;
    double normalized = 0.0;
    bool exact = false;
    double correlation = 0.0;

    /// hamming / n, the loss on the [0, 2] scale.
    double risk_over_n() const noexcept { return n == 0 ? 0.0 : static_cast<double>(hamming) / static_cast<double>(n); }
};

/// Throws DimensionError on length mismatch.
RiskReport hamming_risk(const LabelVector& est, const LabelVector& truth);

struct TallySummary {
    std::size_t count = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double mean_normalized = 0.0;
};

/// Throws DomainError on an empty sequence.
TallySummary tally(std::span<const RiskReport> reports);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;
};

/// Monte-Carlo estimate of
///   G(t, theta) = P( (theta + sigma xi)^T (theta + sigma/(n-1) sum_{j=2..n} xi_j) <= ||theta||^2 t ).
/// The (n-1)-fold noise average is drawn as one standard normal vector scaled by
/// sigma / sqrt(n-1), which has the same law. Rep r uses its own stream seeded with
/// derive_seed(master, 0, r); master is one draw from `rng`. Reps run in parallel
/// and the result does not depend on the thread count.
/// Returns the frequency and its binomial standard error. Throws DomainError for reps < 100.
MonteCarloEstimate estimate_G(double t, std::span<const double> theta, double sigma, std::size_t n, std::size_t reps,
                              CounterRng& rng);

}  // namespace gmmrec
