#include "gmmrec/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include <omp.h>

#include "gmmrec/errors.hpp"

namespace gmmrec::kernels {
namespace {

constexpr std::size_t kRowTile = 8;
#if defined(__AVX512F__)
constexpr std::size_t kColTile = 16;
#else
constexpr std::size_t kColTile = 8;
#endif
constexpr std::size_t kDepthBlock = 192;

std::size_t round_up(std::size_t v, std::size_t m) { return (v + m - 1) / m * m; }

// acc[r][c] += sum over k in [k0, k1) of packed[k][ib + r] * packed[k][jb + c], k ascending.
inline void tile_update(const double* __restrict packed, std::size_t ld, std::size_t k0, std::size_t k1,
                        std::size_t ib, std::size_t jb, double* __restrict c_tile, std::size_t ldc) {
    double acc[kRowTile][kColTile];
    for (std::size_t r = 0; r < kRowTile; ++r)
        for (std::size_t c = 0; c < kColTile; ++c) acc[r][c] = c_tile[r * ldc + c];

    for (std::size_t k = k0; k < k1; ++k) {
        const double* row = packed + k * ld;
        const double* bj = row + jb;
        for (std::size_t r = 0; r < kRowTile; ++r) {
            const double ai = row[ib + r];
#pragma omp simd
            for (std::size_t c = 0; c < kColTile; ++c) acc[r][c] += ai * bj[c];
        }
    }

    for (std::size_t r = 0; r < kRowTile; ++r)
        for (std::size_t c = 0; c < kColTile; ++c) c_tile[r * ldc + c] = acc[r][c];
}

}  // namespace

void gram(std::span<const double> y, std::size_t p, std::size_t n, std::span<double> out) {
    if (y.size() != p * n || out.size() != n * n) throw DimensionError("kernels::gram: size mismatch");

    // Padded width: a multiple of both tile sizes (kColTile is a multiple of
    // kRowTile) so every tile is full.
    const std::size_t ld = round_up(n, kColTile);
    std::vector<double> packed(p * ld, 0.0);
    for (std::size_t k = 0; k < p; ++k) std::memcpy(packed.data() + k * ld, y.data() + k * n, n * sizeof(double));

    std::vector<double> acc(ld * ld, 0.0);
    const auto col_tiles = static_cast<std::ptrdiff_t>(ld / kColTile);
    const bool parallel = n >= 2 * kColTile && !omp_in_parallel();

    // Column tiles outermost so the k-block x kColTile panel stays in L1 while
    // the row tiles at or above the diagonal sweep over it. Widest columns first.
    for (std::size_t k0 = 0; k0 < p; k0 += kDepthBlock) {
        const std::size_t k1 = std::min(p, k0 + kDepthBlock);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
        for (std::ptrdiff_t t = col_tiles - 1; t >= 0; --t) {
            const std::size_t jb = static_cast<std::size_t>(t) * kColTile;
            for (std::size_t ib = 0; ib < jb + kColTile; ib += kRowTile)
                tile_update(packed.data(), ld, k0, k1, ib, jb, acc.data() + ib * ld + jb, ld);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = acc[i * ld + j];
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
}

void symv(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> out) {
    if (a.size() != n * n || x.size() != n || out.size() != n) throw DimensionError("kernels::symv: size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    const bool parallel = n >= kSymvParallelMin && !omp_in_parallel();

#pragma omp parallel if (parallel)
    {
        const auto threads = static_cast<std::size_t>(omp_get_num_threads());
        const auto id = static_cast<std::size_t>(omp_get_thread_num());
        const std::size_t chunk = round_up((n + threads - 1) / threads, 8);
        const std::size_t lo = std::min(n, id * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        double* __restrict dst = out.data();
        for (std::size_t j = 0; j < n; ++j) {
            const double xj = x[j];
            const double* __restrict col = a.data() + j * n;  // row j == column j
#pragma omp simd
            for (std::size_t i = lo; i < hi; ++i) dst[i] += xj * col[i];
        }
    }
}

}  // namespace gmmrec::kernels
