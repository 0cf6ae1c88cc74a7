#include "gmmrec/estimators.hpp"

#include <cmath>
#include <string>

#include "gmmrec/errors.hpp"
#include "gmmrec/synth.hpp"

namespace gmmrec {

EstimateTrace spectral_init(const HollowGram& h, CounterRng& rng, const PowerOptions& options) {
    if (h.order() < 2) throw DomainError("spectral_init: order must be >= 2");
    const EigenPair pair = top_eigpair(h, rng, options);
    EstimateTrace trace;
    trace.labels = sign_vec(pair.vector);
    trace.eigen_gap_warning = pair.gap_warning;
    return trace;
}

EstimateTrace lloyd_steps(const HollowGram& h, const LabelVector& start, std::size_t k_max) {
    if (start.size() != h.order()) throw DimensionError("lloyd_steps: start length does not match H");
    EstimateTrace trace;
    trace.labels = start;
    for (std::size_t step = 1; step <= k_max; ++step) {
        LabelVector next = sign_vec(matvec_hollow(h, trace.labels.as_doubles()));
        trace.iterations_run = step;
        if (next == trace.labels) {
            trace.converged_at = step;
            break;
        }
        trace.labels = std::move(next);
    }
    return trace;
}

std::size_t default_iter_count(std::size_t n) {
    if (n < 2) throw DomainError("default_iter_count: n must be >= 2");
    return static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(n))));
}

EstimateTrace spectral_lloyd(const HollowGram& h, CounterRng& rng) {
    const EstimateTrace init = spectral_init(h, rng);
    EstimateTrace out = lloyd_steps(h, init.labels, default_iter_count(h.order()));
    out.eigen_gap_warning = init.eigen_gap_warning;
    return out;
}

EstimateTrace spectral_lloyd(const Matrix& y, CounterRng& rng) {
    return spectral_lloyd(hollow(gram(y)), rng);
}

EstimateTrace random_lloyd(const HollowGram& h, CounterRng& rng, std::optional<std::size_t> k_max) {
    const LabelVector start = sample_labels(h.order(), rng);
    return lloyd_steps(h, start, k_max.value_or(default_iter_count(h.order())));
}

EstimateTrace random_lloyd(const Matrix& y, CounterRng& rng, std::optional<std::size_t> k_max) {
    return random_lloyd(hollow(gram(y)), rng, k_max);
}

LabelVector oracle_supervised(const Matrix& y, const LabelVector& eta_true) {
    const std::size_t p = y.rows();
    const std::size_t n = y.cols();
    if (eta_true.size() != n) throw DimensionError("oracle_supervised: label length does not match Y");

    // Label-weighted sum of all observations; observation i is removed from
    // its own score by subtracting eta_i ||Y_i||^2.
    std::vector<double> weighted(p, 0.0);
    std::vector<double> self(n, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const auto row = y.row(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += eta_true[j] * row[j];
            self[j] += row[j] * row[j];
        }
        weighted[k] = acc;
    }
    std::vector<double> values(n, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const auto row = y.row(k);
        for (std::size_t i = 0; i < n; ++i) values[i] += row[i] * weighted[k];
    }
    for (std::size_t i = 0; i < n; ++i) values[i] -= eta_true[i] * self[i];
    return sign_vec(values);
}

LabelVector oracle_known_center(const Matrix& y, std::span<const double> theta) {
    if (theta.size() != y.rows()) throw DimensionError("oracle_known_center: theta length does not match Y");
    bool nonzero = false;
    for (double t : theta) nonzero = nonzero || t != 0.0;
    if (!nonzero) throw DomainError("oracle_known_center: theta must be nonzero");

    std::vector<double> proj(y.cols(), 0.0);
    for (std::size_t k = 0; k < y.rows(); ++k) {
        const auto row = y.row(k);
        for (std::size_t i = 0; i < y.cols(); ++i) proj[i] += theta[k] * row[i];
    }
    return sign_vec(proj);
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::SpectralLloyd: return "spectral_lloyd";
        case Method::Spectral: return "spectral";
        case Method::RandomLloyd: return "random_lloyd";
        case Method::OracleSupervised: return "oracle_supervised";
        case Method::OracleKnownCenter: return "oracle_known_center";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (method_name(m) == name) return m;
    throw DomainError("unknown method '" + std::string(name) + "'");
}

}  // namespace gmmrec
