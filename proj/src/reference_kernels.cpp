#include "gmmrec/errors.hpp"
#include "gmmrec/kernels.hpp"

namespace gmmrec::reference {

void gram(std::span<const double> y, std::size_t p, std::size_t n, std::span<double> out) {
    if (y.size() != p * n || out.size() != n * n) throw DimensionError("reference::gram: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < p; ++k) s += y[k * n + i] * y[k * n + j];
            out[i * n + j] = s;
            out[j * n + i] = s;
        }
    }
}

void symv(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> out) {
    if (a.size() != n * n || x.size() != n || out.size() != n) throw DimensionError("reference::symv: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
        out[i] = s;
    }
}

}  // namespace gmmrec::reference
