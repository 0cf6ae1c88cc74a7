#include "gmmrec/core_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gmmrec/errors.hpp"

namespace gmmrec {

void ProblemConfig::validate() const {
    if (n < 2) throw DomainError("ProblemConfig: n must be >= 2, got " + std::to_string(n));
    if (p < 1) throw DomainError("ProblemConfig: p must be >= 1, got " + std::to_string(p));
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("ProblemConfig: sigma must be > 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("ProblemConfig: delta must be > 0");
}

double snr(const ProblemConfig& config) {
    config.validate();
    const double ratio = (config.delta * config.delta) / (config.sigma * config.sigma);
    const double aspect = static_cast<double>(config.p) / static_cast<double>(config.n);
    return ratio / std::sqrt(ratio + aspect);
}

double exact_threshold(std::int64_t n, std::int64_t p, double sigma) {
    if (n < 3) throw DomainError("exact_threshold: n must be >= 3");
    if (p < 1) throw DomainError("exact_threshold: p must be >= 1");
    if (!(sigma > 0.0)) throw DomainError("exact_threshold: sigma must be > 0");
    const double log_n = std::log(static_cast<double>(n));
    const double ratio = 2.0 * static_cast<double>(p) / (static_cast<double>(n) * log_n);
    return sigma * std::sqrt((1.0 + std::sqrt(1.0 + ratio)) * log_n);
}

double delta_for_snr(double r, std::int64_t n, std::int64_t p, double sigma) {
    if (!(r > 0.0)) throw DomainError("delta_for_snr: r must be > 0");
    if (n < 2 || p < 1) throw DomainError("delta_for_snr: need n >= 2 and p >= 1");
    if (!(sigma > 0.0)) throw DomainError("delta_for_snr: sigma must be > 0");
    const double r2 = r * r;
    const double aspect = static_cast<double>(p) / static_cast<double>(n);
    // Stable form of (r^2 + sqrt(r^4 + 4 r^2 p/n)) / 2.
    const double x = 0.5 * r2 * (1.0 + std::sqrt(1.0 + 4.0 * aspect / r2));
    return sigma * std::sqrt(x);
}

ProblemConfig ab_to_config(const ABPoint& point, std::int64_t n, double sigma) {
    if (!(point.a > 0.0) || !(point.b > 0.0)) throw DomainError("ab_to_config: a and b must be > 0");
    if (n < 3) throw DomainError("ab_to_config: n must be >= 3");
    if (!(sigma > 0.0)) throw DomainError("ab_to_config: sigma must be > 0");
    const double log_n = std::log(static_cast<double>(n));
    ProblemConfig config;
    config.n = n;
    config.sigma = sigma;
    config.delta = sigma * std::sqrt((1.0 + std::sqrt(point.a)) * log_n);
    const auto p = static_cast<std::int64_t>(std::llround(point.b * static_cast<double>(n) * log_n));
    config.p = p < 1 ? 1 : p;
    return config;
}

double threshold_a(double b) {
    return 1.0 + 2.0 * b;
}

double critical_dimension(std::int64_t n) {
    const auto nd = static_cast<double>(n);
    return nd * std::log(nd);
}

double gaussian_tail(double t) {
    // erfc keeps full relative accuracy deep in the upper tail.
    return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

double lower_bound_curve(const ProblemConfig& config) {
    return gaussian_tail(snr(config));
}

}  // namespace gmmrec
