#include "gmmrec/risk.hpp"

#include <cmath>

#include "gmmrec/errors.hpp"
#include "gmmrec/rng.hpp"

namespace gmmrec {

RiskReport hamming_risk(const LabelVector& est, const LabelVector& truth) {
    if (est.size() != truth.size()) throw DimensionError("hamming_risk: length mismatch");
    const std::size_t n = truth.size();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i) mismatches += est[i] != truth[i] ? 1 : 0;
    const std::size_t best = std::min(mismatches, n - mismatches);

    RiskReport r;
    r.n = n;
    r.hamming = 2 * best;
    r.exact = best == 0;
    r.normalized = static_cast<double>(best) / static_cast<double>(n);
    r.correlation = static_cast<double>(n - 2 * best) / static_cast<double>(n);
    return r;
}

TallySummary tally(std::span<const RiskReport> reports) {
    if (reports.empty()) throw DomainError("tally: empty input");
    TallySummary s;
    s.count = reports.size();
    double sum = 0.0;
    for (const auto& r : reports) {
        s.successes += r.exact ? 1 : 0;
        sum += r.normalized;
    }
    s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.count);
    s.mean_normalized = sum / static_cast<double>(s.count);
    return s;
}

MonteCarloEstimate estimate_G(double t, std::span<const double> theta, double sigma, std::size_t n, std::size_t reps,
                              CounterRng& rng) {
    if (reps < 100) throw DomainError("estimate_G: reps must be >= 100");
    if (n < 2) throw DomainError("estimate_G: n must be >= 2");
    if (theta.empty()) throw DomainError("estimate_G: theta must be nonempty");
    if (!(sigma >= 0.0)) throw DomainError("estimate_G: sigma must be >= 0");

    const std::size_t p = theta.size();
    double theta2 = 0.0;
    for (double x : theta) theta2 += x * x;
    const double threshold = theta2 * t;
    const double avg_scale = sigma / std::sqrt(static_cast<double>(n - 1));
    const std::uint64_t master = rng.next_u64();

    long long hits = 0;
    const auto total = static_cast<long long>(reps);
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long long r = 0; r < total; ++r) {
        CounterRng local(derive_seed(master, 0, static_cast<std::uint64_t>(r)));
        double s = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
            const double left = theta[k] + sigma * local.normal();
            const double right = theta[k] + avg_scale * local.normal();
            s += left * right;
        }
        hits += s <= threshold ? 1 : 0;
    }

    MonteCarloEstimate out;
    out.reps = reps;
    out.estimate = static_cast<double>(hits) / static_cast<double>(reps);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(reps));
    return out;
}

}  // namespace gmmrec
