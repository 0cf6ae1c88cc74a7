#pragma once

// Closed-form quantities of the two-component Gaussian mixture model.
// All logarithms are natural logarithms.

#include <cstdint>

namespace gmmrec {

/// Generative parameters: n observations in dimension p, noise level sigma,
/// separation delta (lower bound on the center norm).
struct ProblemConfig {
    std::int64_t n = 0;
    std::int64_t p = 0;
    double sigma = 1.0;
    double delta = 1.0;

    /// Throws DomainError unless n >= 2, p >= 1, sigma > 0, delta > 0.
    void validate() const;
};

/// Reparameterization used for phase diagrams:
///   delta^2 = sigma^2 (1 + sqrt(a)) log n,   p = b n log n.
struct ABPoint {
    double a = 1.0;
    double b = 1.0;
};

/// Effective signal-to-noise ratio
///   r_n = (delta^2/sigma^2) / sqrt(delta^2/sigma^2 + p/n).
double snr(const ProblemConfig& config);

/// Separation at which exact recovery switches on:
///   delta_bar^2 = sigma^2 (1 + sqrt(1 + 2p / (n log n))) log n.
/// At delta = delta_bar, snr^2 = 2 log n.
double exact_threshold(std::int64_t n, std::int64_t p, double sigma);

/// Inverse of snr in delta for fixed (n, p, sigma):
///   delta^2 = sigma^2 r^2 (1 + sqrt(1 + 4p / (n r^2))) / 2.
double delta_for_snr(double r, std::int64_t n, std::int64_t p, double sigma);

/// Maps an (a, b) point to a config. p is rounded to the nearest integer with floor 1.
ProblemConfig ab_to_config(const ABPoint& point, std::int64_t n, double sigma = 1.0);

/// Exact-recovery threshold curve in (a, b) coordinates: a = 1 + 2b.
double threshold_a(double b);

/// Critical dimension n log n where the threshold changes regime.
double critical_dimension(std::int64_t n);

/// Standard normal upper tail P(Z > t).
double gaussian_tail(double t);

/// Rate shape gaussian_tail(snr(config)) for reference curves. Not a calibrated
/// bound: the absolute constants of the minimax lower bound are dropped.
double lower_bound_curve(const ProblemConfig& config);

}  // namespace gmmrec
