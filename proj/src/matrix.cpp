#include "gmmrec/matrix.hpp"

#include <cmath>
#include <string>

#include "gmmrec/errors.hpp"
#include "gmmrec/kernels.hpp"

namespace gmmrec {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw DimensionError("Matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                             std::to_string(data_.size()));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

SymMatrix::SymMatrix(std::size_t n) : m_(n, n) {}

SymMatrix::SymMatrix(const Matrix& m) : m_(m.rows(), m.cols()) {
    if (m.rows() != m.cols()) throw DimensionError("SymMatrix: input is not square");
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
        m_(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m_(i, j) = v;
            m_(j, i) = v;
        }
    }
}

SymMatrix SymMatrix::from_symmetric(Matrix m) {
    if (m.rows() != m.cols()) throw DimensionError("SymMatrix: input is not square");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i)) throw DomainError("SymMatrix::from_symmetric: input is not symmetric");
    SymMatrix s;
    s.m_ = std::move(m);
    return s;
}

HollowGram hollow(const SymMatrix& m) {
    SymMatrix copy = m;
    for (std::size_t i = 0; i < copy.order(); ++i) copy.m_(i, i) = 0.0;
    return HollowGram(std::move(copy));
}

SymMatrix gram(const Matrix& y) {
    if (y.rows() < 1 || y.cols() < 2) throw DimensionError("gram: need p >= 1 rows and n >= 2 columns");
    Matrix out(y.cols(), y.cols());
    kernels::gram(y.data(), y.rows(), y.cols(), out.data());
    return SymMatrix::from_symmetric(std::move(out));
}

std::vector<double> matvec(const SymMatrix& s, std::span<const double> x) {
    if (x.size() != s.order())
        throw DimensionError("matvec: vector length " + std::to_string(x.size()) + " vs order " +
                             std::to_string(s.order()));
    std::vector<double> out(s.order());
    kernels::symv(s.dense().data(), s.order(), x, out);
    return out;
}

std::vector<double> matvec_hollow(const HollowGram& h, std::span<const double> x) {
    return matvec(h.base(), x);
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) {
    return std::sqrt(dot(x, x));
}

}  // namespace gmmrec
