#pragma once

// Seeded generation of mixture instances Y = theta eta^T + sigma Xi.

#include <cstdint>
#include <span>
#include <vector>

#include "gmmrec/core_model.hpp"
#include "gmmrec/labels.hpp"
#include "gmmrec/matrix.hpp"
#include "gmmrec/rng.hpp"

namespace gmmrec {

/// How the center theta is drawn.
///   FixedNorm:     uniform direction, ||theta|| = delta exactly.
///   GaussianPrior: i.i.d. N(0, alpha^2) entries, no norm guarantee.
struct CenterMode {
    enum class Tag { FixedNorm, GaussianPrior };
    Tag tag = Tag::FixedNorm;
    double alpha = 1.0;

    static CenterMode fixed_norm() { return {}; }
    static CenterMode gaussian_prior(double alpha) { return {Tag::GaussianPrior, alpha}; }

    void validate() const;
    bool operator==(const CenterMode&) const = default;
};

/// One model instance. Y is p x n, row-major; column i is observation i.
struct Dataset {
    Matrix y;
    std::vector<double> theta;
    LabelVector eta;
    ProblemConfig config;
    CenterMode mode;
    std::uint64_t seed = 0;

    std::size_t n() const noexcept { return y.cols(); }
    std::size_t p() const noexcept { return y.rows(); }
};

/// Rademacher labels, one generator draw per entry.
LabelVector sample_labels(std::size_t n, CounterRng& rng);

/// Center vector of length p. FixedNorm retries up to 8 times if the raw
/// Gaussian draw has norm below 1e-300, then throws DomainError.
std::vector<double> sample_center(std::size_t p, double delta, const CenterMode& mode, CounterRng& rng);

/// Y = theta eta^T + sigma Xi with noise drawn in row-major order
/// (coordinate k outer, observation i inner). sigma = 0 is accepted.
Matrix assemble_observations(std::span<const double> theta, const LabelVector& eta, double sigma, CounterRng& rng);

/// Labels, then center, then noise, all from one stream seeded with `seed`.
/// config.sigma may be 0 for noiseless instances; other fields are validated.
Dataset sample_dataset(const ProblemConfig& config, const CenterMode& mode, std::uint64_t seed);

}  // namespace gmmrec
