#pragma once

// Dense kernels behind gram() and matvec_hollow().
//
// Two implementations share one signature:
//   kernels::   cache-blocked, OpenMP-parallel, used in production.
//   reference:: plain serial loops, kept as the test and benchmark baseline.
//
// Summation order. Every output entry of the parallel kernels is accumulated
// in ascending index of the contracted dimension (k for the Gram product, j
// for the matrix-vector product), one term at a time, within a single thread.
// Threads only split the set of output entries, so results do not depend on
// the thread count.

#include <cstddef>
#include <span>

namespace gmmrec::kernels {

/// out (n x n row-major) = Y^T Y for Y row-major p x n. The upper triangle is
/// computed with register tiles (8 x 16 with AVX-512) over a packed, zero-padded copy of Y and
/// mirrored, so out is exactly symmetric.
void gram(std::span<const double> y, std::size_t p, std::size_t n, std::span<double> out);

/// out = A x for symmetric row-major A (n x n), as a sequence of axpy updates
/// out += x_j * A[j, :] over ascending j.
void symv(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> out);

/// Minimum order at which symv opens a parallel region.
inline constexpr std::size_t kSymvParallelMin = 1024;

}  // namespace gmmrec::kernels

namespace gmmrec::reference {

/// Naive triple loop, one dot product per entry (i <= j), mirrored.
void gram(std::span<const double> y, std::size_t p, std::size_t n, std::span<double> out);

/// Row-by-row dot products.
void symv(std::span<const double> a, std::size_t n, std::span<const double> x, std::span<double> out);

}  // namespace gmmrec::reference
