#pragma once

// Label estimators: spectral initialization on the hollowed Gram matrix,
// sign-based Lloyd iterations, the combined pipeline, a random-start variant,
// and two oracles that see part of the ground truth.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "gmmrec/eigen.hpp"
#include "gmmrec/labels.hpp"
#include "gmmrec/matrix.hpp"
#include "gmmrec/rng.hpp"

namespace gmmrec {

struct EstimateTrace {
    LabelVector labels;
    std::size_t iterations_run = 0;
    /// Index t of the first map evaluation that returned its own input.
    std::optional<std::size_t> converged_at;
    bool eigen_gap_warning = false;
};

/// sign(v) for the top eigenvector v of H. iterations_run = 0.
EstimateTrace spectral_init(const HollowGram& h, CounterRng& rng, const PowerOptions& options = {});

/// Iterates eta <- sign(H eta) at most k_max times, stopping at the first fixed point.
EstimateTrace lloyd_steps(const HollowGram& h, const LabelVector& start, std::size_t k_max);

/// floor(3 log n).
std::size_t default_iter_count(std::size_t n);

/// gram -> hollow -> spectral_init -> lloyd_steps(default_iter_count(n)).
EstimateTrace spectral_lloyd(const Matrix& y, CounterRng& rng);
EstimateTrace spectral_lloyd(const HollowGram& h, CounterRng& rng);

/// Rademacher start drawn from rng, then lloyd_steps. k_max defaults to default_iter_count(n).
EstimateTrace random_lloyd(const Matrix& y, CounterRng& rng, std::optional<std::size_t> k_max = std::nullopt);
EstimateTrace random_lloyd(const HollowGram& h, CounterRng& rng, std::optional<std::size_t> k_max = std::nullopt);

/// eta**_i = sign(Y_i^T sum_{j != i} eta_j Y_j), computed from Y directly.
LabelVector oracle_supervised(const Matrix& y, const LabelVector& eta_true);

/// eta*_i = sign(Y_i^T theta). Throws DomainError for theta = 0.
LabelVector oracle_known_center(const Matrix& y, std::span<const double> theta);

enum class Method { SpectralLloyd, Spectral, RandomLloyd, OracleSupervised, OracleKnownCenter };

inline constexpr Method kAllMethods[] = {Method::SpectralLloyd, Method::Spectral, Method::RandomLloyd,
                                         Method::OracleSupervised, Method::OracleKnownCenter};

std::string_view method_name(Method m);
/// Throws DomainError on unknown names.
Method parse_method(std::string_view name);

}  // namespace gmmrec
