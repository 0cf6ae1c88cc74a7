#include "gmmrec/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "gmmrec/eigen.hpp"
#include "gmmrec/estimators.hpp"
#include "gmmrec/kernels.hpp"
#include "gmmrec/synth.hpp"

namespace gmmrec {
namespace {

std::size_t uniform_index(CounterRng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

double uniform_in(CounterRng& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.uniform();
}

void record(PropertyResult& r, double violation) {
    ++r.cases;
    if (violation > 0.0) ++r.failures;
    r.worst = std::max(r.worst, violation);
}

PropertyResult finish(PropertyResult r) {
    r.passed = r.failures == 0 && r.cases > 0;
    return r;
}

}  // namespace

SymMatrix random_symmetric(std::size_t n, CounterRng& rng) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.normal();
            m(i, j) = v;
            m(j, i) = v;
        }
    return SymMatrix::from_symmetric(std::move(m));
}

Matrix random_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

PropertyResult check_oracle_identity(std::size_t cases, std::uint64_t seed) {
    PropertyResult r{"oracle_supervised == sign(H(Y^T Y) eta)"};
    CounterRng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        ProblemConfig config;
        config.n = static_cast<std::int64_t>(uniform_index(rng, 3, 50));
        config.p = static_cast<std::int64_t>(uniform_index(rng, 1, 100));
        config.sigma = uniform_in(rng, 0.1, 3.0);
        config.delta = uniform_in(rng, 0.1, 5.0);
        const Dataset d = sample_dataset(config, CenterMode::fixed_norm(), rng.next_u64());
        const LabelVector direct = oracle_supervised(d.y, d.eta);
        const LabelVector via_gram = sign_vec(matvec_hollow(hollow(gram(d.y)), d.eta.as_doubles()));
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < direct.size(); ++i) mismatches += direct[i] != via_gram[i] ? 1 : 0;
        record(r, static_cast<double>(mismatches));
    }
    return finish(r);
}

PropertyResult check_hollow_norm_bound(std::size_t cases, std::uint64_t seed) {
    PropertyResult r{"||H(A)||op <= 2 ||A||op"};
    CounterRng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = uniform_index(rng, 2, 16);
        SymMatrix a = random_symmetric(n, rng);
        // Half of the cases get a heavy diagonal, where the bound is nearly tight.
        if (c % 2 == 1) {
            Matrix m = a.dense();
            for (std::size_t i = 0; i < n; ++i) m(i, i) *= 10.0;
            a = SymMatrix::from_symmetric(std::move(m));
        }
        const double lhs = op_norm_oracle(hollow(a).base().dense());
        const double rhs = 2.0 * op_norm_oracle(a.dense()) + 1e-9;
        record(r, lhs - rhs);
    }
    return finish(r);
}

PropertyResult check_hollow_centered_bound(std::size_t cases, std::uint64_t seed) {
    PropertyResult r{"||H(W^T W)||op <= 2 ||W^T W - E W^T W||op"};
    CounterRng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = uniform_index(rng, 2, 16);
        const std::size_t p = uniform_index(rng, 1, 40);
        const double sigma = uniform_in(rng, 0.2, 2.0);
        Matrix w = random_matrix(p, n, rng);
        for (double& v : w.data()) v *= sigma;
        const SymMatrix g = gram(w);
        Matrix centered = g.dense();
        for (std::size_t i = 0; i < n; ++i) centered(i, i) -= static_cast<double>(p) * sigma * sigma;
        const double lhs = op_norm_oracle(hollow(g).base().dense());
        const double rhs = 2.0 * op_norm_oracle(centered) + 1e-9;
        record(r, lhs - rhs);
    }
    return finish(r);
}

PropertyResult check_spike_norm(std::size_t max_n, std::uint64_t seed) {
    PropertyResult r{"||H(eta eta^T)||op == n - 1"};
    CounterRng rng(seed);
    for (std::size_t n = 2; n <= max_n; ++n) {
        const LabelVector eta = sample_labels(n, rng);
        Matrix outer(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) outer(i, j) = eta[i] * eta[j];
        const double norm = op_norm_oracle(hollow(SymMatrix::from_symmetric(std::move(outer))).base().dense());
        record(r, std::abs(norm - static_cast<double>(n - 1)) - 1e-9);
    }
    return finish(r);
}

PropertyResult check_rounding_bound(std::size_t cases, std::uint64_t seed) {
    PropertyResult r{"(1/n)|x - sign(y)| <= 2 ||x/sqrt(n) - y||^2"};
    CounterRng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = uniform_index(rng, 2, 200);
        const LabelVector x = sample_labels(n, rng);
        const double root_n = std::sqrt(static_cast<double>(n));
        // y near x/sqrt(n) with varying noise scale so both sides of the bound move.
        const double scale = std::pow(10.0, uniform_in(rng, -3.0, 0.5)) / root_n;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / root_n + scale * rng.normal();
        if (c % 10 == 0) y[0] = 0.0;  // exercise sign(0) = +1
        const LabelVector s = sign_vec(y);
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lhs += std::abs(x[i] - s[i]);
            const double d = x[i] / root_n - y[i];
            rhs += d * d;
        }
        lhs /= static_cast<double>(n);
        record(r, lhs - (2.0 * rhs + 1e-12));
    }
    return finish(r);
}

PropertyResult check_eigensolver(std::size_t cases, std::size_t max_n, std::uint64_t seed) {
    PropertyResult r{"power iteration agrees with Jacobi"};
    CounterRng rng(seed);
    PowerOptions options;
    options.max_iter = 2'000'000;
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = uniform_index(rng, 2, max_n);
        const SymMatrix s = random_symmetric(n, rng);
        const Spectrum oracle = jacobi_eig(s);
        CounterRng start(rng.next_u64());
        const EigenPair pair = top_eigpair(s, start, options);
        double overlap = 0.0;
        for (std::size_t i = 0; i < n; ++i) overlap += pair.vector[i] * oracle.vectors(i, 0);
        const double vec_violation = (1.0 - 1e-8) - std::abs(overlap);
        const double lam = oracle.values.front();
        const double val_violation = std::abs(pair.lambda - lam) - 1e-8 * (1.0 + std::abs(lam));
        record(r, std::max(vec_violation, val_violation));
    }
    return finish(r);
}

PropertyResult check_kernels(std::size_t cases, std::uint64_t seed) {
    PropertyResult r{"blocked kernels match serial reference"};
    CounterRng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = uniform_index(rng, 2, 90);
        const std::size_t p = uniform_index(rng, 1, 400);
        const Matrix y = random_matrix(p, n, rng);
        std::vector<double> fast(n * n), slow(n * n);
        kernels::gram(y.data(), p, n, fast);
        reference::gram(y.data(), p, n, slow);
        double worst = 0.0;
        for (std::size_t i = 0; i < n * n; ++i)
            worst = std::max(worst, std::abs(fast[i] - slow[i]) / (1.0 + std::abs(slow[i])));
        std::vector<double> x(n), fv(n), sv(n);
        for (double& v : x) v = rng.normal();
        kernels::symv(slow, n, x, fv);
        reference::symv(slow, n, x, sv);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(fv[i] - sv[i]) / (1.0 + std::abs(sv[i])));
        record(r, worst - 1e-10);
    }
    return finish(r);
}

bool run_selftest(std::ostream& out, std::uint64_t seed) {
    const std::vector<PropertyResult> results{
        check_kernels(40, seed),
        check_oracle_identity(50, seed + 1),
        check_hollow_norm_bound(200, seed + 2),
        check_hollow_centered_bound(100, seed + 3),
        check_spike_norm(64, seed + 4),
        check_rounding_bound(200, seed + 5),
        check_eigensolver(40, 32, seed + 6),
    };
    bool ok = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(48) << r.name << " cases=" << r.cases
            << " failures=" << r.failures << '\n';
        ok = ok && r.passed;
    }
    return ok;
}

}  // namespace gmmrec
