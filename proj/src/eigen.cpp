#include "gmmrec/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gmmrec/errors.hpp"
#include "gmmrec/kernels.hpp"

namespace gmmrec {
namespace {

double gershgorin_shift(const SymMatrix& s) {
    double shift = 0.0;
    for (std::size_t i = 0; i < s.order(); ++i) {
        double row = 0.0;
        for (double v : s.row(i)) row += std::abs(v);
        shift = std::max(shift, row);
    }
    return shift;
}

void normalize(std::vector<double>& v) {
    const double norm = norm2(v);
    for (auto& x : v) x /= norm;
}

void fix_sign(std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (v[best] < 0.0)
        for (auto& x : v) x = -x;
}

constexpr std::size_t kDecayWindow = 8;

}  // namespace

EigenPair top_eigpair(const SymMatrix& s, CounterRng& rng, const PowerOptions& options) {
    const std::size_t n = s.order();
    if (n < 2) throw DomainError("top_eigpair: order must be >= 2");
    if (!(options.tol > 0.0)) throw DomainError("top_eigpair: tol must be > 0");
    const std::size_t max_iter = options.max_iter == 0 ? 100 * n : options.max_iter;

    EigenPair out;
    out.shift = gershgorin_shift(s);

    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    normalize(v);

    std::vector<double> sv(n);
    std::vector<double> history;  // residuals, most recent last
    history.reserve(kDecayWindow + 1);

    for (std::size_t it = 1;; ++it) {
        kernels::symv(s.dense().data(), n, v, sv);
        const double lambda = dot(v, sv);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = sv[i] - lambda * v[i];
            r2 += d * d;
        }
        const double residual = std::sqrt(r2);
        const double scale = std::abs(lambda) + out.shift;

        if (history.size() == kDecayWindow + 1) history.erase(history.begin());
        history.push_back(residual);

        if (residual <= options.tol * scale || scale == 0.0) {
            out.lambda = lambda;
            out.residual = residual;
            out.iterations = it;
            double rho = 0.0;
            if (history.size() >= 3 && history.front() > 0.0 && residual > 0.0) {
                const auto steps = static_cast<double>(history.size() - 1);
                rho = std::min(1.0, std::pow(residual / history.front(), 1.0 / steps));
            }
            out.gap_estimate = (lambda + out.shift) * (1.0 - rho);
            out.gap_warning = out.gap_estimate < std::sqrt(options.tol) * scale;
            out.vector = std::move(v);
            fix_sign(out.vector);
            return out;
        }
        if (it >= max_iter)
            throw ConvergenceError("top_eigpair: no convergence after " + std::to_string(max_iter) +
                                       " iterations (residual " + std::to_string(residual) + ")",
                                   residual);

        for (std::size_t i = 0; i < n; ++i) v[i] = sv[i] + out.shift * v[i];
        normalize(v);
    }
}

EigenPair top_eigpair(const HollowGram& h, CounterRng& rng, const PowerOptions& options) {
    return top_eigpair(h.base(), rng, options);
}

Spectrum jacobi_eig(const SymMatrix& s) {
    const std::size_t n = s.order();
    if (n > kOracleMaxOrder)
        throw DimensionError("jacobi_eig: order " + std::to_string(n) + " exceeds oracle limit " +
                          std::to_string(kOracleMaxOrder));
    Matrix a = s.dense();
    Matrix v = Matrix::identity(n);

    double frob2 = 0.0;
    for (double x : a.data()) frob2 += x * x;
    const double target = 1e-13 * std::sqrt(frob2);

    auto off_norm = [&] {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) off += a(i, j) * a(i, j);
        return std::sqrt(off);
    };

    Spectrum out;
    while (off_norm() > target && out.sweeps < 100) {
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle that zeroes a(p, q) (Golub & Van Loan, sym.schur2).
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

double op_norm_oracle(const Matrix& m) {
    const std::size_t small = std::min(m.rows(), m.cols());
    if (small > kOracleMaxOrder) throw DimensionError("op_norm_oracle: smaller dimension exceeds oracle limit");
    if (small == 0) return 0.0;
    const bool tall = m.rows() >= m.cols();
    const std::size_t k = small;
    const std::size_t len = tall ? m.rows() : m.cols();
    Matrix prod(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double sum = 0.0;
            for (std::size_t t = 0; t < len; ++t)
                sum += tall ? m(t, i) * m(t, j) : m(i, t) * m(j, t);
            prod(i, j) = sum;
            prod(j, i) = sum;
        }
    }
    const Spectrum spec = jacobi_eig(SymMatrix::from_symmetric(std::move(prod)));
    return std::sqrt(std::max(0.0, spec.values.front()));
}

}  // namespace gmmrec
