#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gmmrec {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    /// Copy of column c (for a p x n data matrix: observation c).
    std::vector<double> column(std::size_t c) const;

    Matrix transpose() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Square symmetric matrix, full storage. Symmetry is exact: construction from
/// an arbitrary square matrix replaces it with (M + M^T) / 2.
class HollowGram;

class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& m);
    explicit SymMatrix(std::size_t n);

    /// Wraps data the caller guarantees to be exactly symmetric (checked).
    static SymMatrix from_symmetric(Matrix m);

    std::size_t order() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    std::span<const double> row(std::size_t i) const noexcept { return m_.row(i); }
    const Matrix& dense() const noexcept { return m_; }

    bool operator==(const SymMatrix&) const = default;

private:
    friend class HollowGram;
    friend HollowGram hollow(const SymMatrix&);
    Matrix m_;
};

/// Symmetric matrix with an identically zero diagonal.
class HollowGram {
public:
    HollowGram() = default;

    const SymMatrix& base() const noexcept { return base_; }
    std::size_t order() const noexcept { return base_.order(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return base_(i, j); }

    bool operator==(const HollowGram&) const = default;

private:
    friend HollowGram hollow(const SymMatrix&);
    explicit HollowGram(SymMatrix base) : base_(std::move(base)) {}
    SymMatrix base_;
};

/// H(M) = M - diag(M). Off-diagonal entries are copied unchanged.
HollowGram hollow(const SymMatrix& m);

/// Y^T Y for a p x n matrix Y (n x n result, exactly symmetric).
SymMatrix gram(const Matrix& y);

/// Dense H x. Throws DimensionError on size mismatch.
std::vector<double> matvec_hollow(const HollowGram& h, std::span<const double> x);

/// Dense S x.
std::vector<double> matvec(const SymMatrix& s, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace gmmrec
