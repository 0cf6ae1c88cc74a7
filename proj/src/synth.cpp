#include "gmmrec/synth.hpp"

#include <cmath>

#include "gmmrec/errors.hpp"

namespace gmmrec {

void CenterMode::validate() const {
    if (tag == Tag::GaussianPrior && !(alpha > 0.0)) throw DomainError("CenterMode: alpha must be > 0");
}

LabelVector sample_labels(std::size_t n, CounterRng& rng) {
    if (n < 2) throw DomainError("sample_labels: n must be >= 2");
    std::vector<std::int8_t> eta(n);
    for (auto& e : eta) e = static_cast<std::int8_t>(rng.rademacher());
    return LabelVector(std::move(eta));
}

std::vector<double> sample_center(std::size_t p, double delta, const CenterMode& mode, CounterRng& rng) {
    if (p < 1) throw DomainError("sample_center: p must be >= 1");
    if (!(delta > 0.0)) throw DomainError("sample_center: delta must be > 0");
    mode.validate();

    std::vector<double> theta(p);
    if (mode.tag == CenterMode::Tag::GaussianPrior) {
        for (auto& t : theta) t = mode.alpha * rng.normal();
        return theta;
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
        for (auto& t : theta) t = rng.normal();
        const double norm = norm2(theta);
        if (norm >= 1e-300) {
            for (auto& t : theta) t = t / norm * delta;
            return theta;
        }
    }
    throw DomainError("sample_center: degenerate Gaussian draw after 8 attempts");
}

Matrix assemble_observations(std::span<const double> theta, const LabelVector& eta, double sigma, CounterRng& rng) {
    if (!(sigma >= 0.0)) throw DomainError("assemble_observations: sigma must be >= 0");
    const std::size_t p = theta.size();
    const std::size_t n = eta.size();
    Matrix y(p, n);
    rng.fill_normal(y.data(), sigma);
    for (std::size_t k = 0; k < p; ++k) {
        auto row = y.row(k);
        const double tk = theta[k];
        for (std::size_t i = 0; i < n; ++i) row[i] += tk * eta[i];
    }
    return y;
}

Dataset sample_dataset(const ProblemConfig& config, const CenterMode& mode, std::uint64_t seed) {
    if (config.sigma == 0.0) {
        ProblemConfig check = config;
        check.sigma = 1.0;
        check.validate();
    } else {
        config.validate();
    }
    CounterRng rng(seed);
    Dataset d;
    d.config = config;
    d.mode = mode;
    d.seed = seed;
    d.eta = sample_labels(static_cast<std::size_t>(config.n), rng);
    d.theta = sample_center(static_cast<std::size_t>(config.p), config.delta, mode, rng);
    d.y = assemble_observations(d.theta, d.eta, config.sigma, rng);
    return d;
}

}  // namespace gmmrec
