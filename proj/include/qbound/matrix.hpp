#ifndef QBOUND_MATRIX_HPP
#define QBOUND_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

#include "qbound/real.hpp"

namespace qbound {

/// Dense row-major matrix of Reals.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1L);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Real& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  const Real& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Real> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// Symmetric matrix with a single stored (lower) triangle, so
/// M(i,j) and M(j,i) alias the same element exactly.
class SymMatrix {
 public:
  SymMatrix() : n_(0) {}
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * (n + 1) / 2) {}

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1L);
    return m;
  }

  std::size_t size() const { return n_; }

  Real& operator()(std::size_t i, std::size_t j) { return a_[index(i, j)]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return a_[index(i, j)]; }

  /// Leading (q+1)-by-(q+1) principal submatrix.
  SymMatrix leading(std::size_t q) const {
    assert(q < n_);
    SymMatrix m(q + 1);
    for (std::size_t i = 0; i <= q; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    assert(i < n_);
    return i * (i + 1) / 2 + j;
  }
  std::size_t n_;
  std::vector<Real> a_;
};

/// Lower-triangular matrix; elements above the diagonal are not stored
/// and read back as an exact zero.
class LowerTriangular {
 public:
  LowerTriangular() : n_(0) {}
  explicit LowerTriangular(std::size_t n) : n_(n), a_(n * (n + 1) / 2) {}

  static LowerTriangular identity(std::size_t n) {
    LowerTriangular m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Real(1L);
    return m;
  }

  std::size_t size() const { return n_; }

  /// Stored element, j <= i required.
  Real& at(std::size_t i, std::size_t j) {
    assert(j <= i && i < n_);
    return a_[i * (i + 1) / 2 + j];
  }
  const Real& at(std::size_t i, std::size_t j) const {
    assert(j <= i && i < n_);
    return a_[i * (i + 1) / 2 + j];
  }

  /// Element with the upper triangle read as zero.
  const Real& operator()(std::size_t i, std::size_t j) const {
    return j <= i ? at(i, j) : zero_;
  }

 private:
  std::size_t n_;
  std::vector<Real> a_;
  Real zero_;
};

/// L * L^T as a SymMatrix, fixed row-major ascending summation order.
SymMatrix gram(const LowerTriangular& l);

Matrix to_dense(const SymMatrix& m);
Matrix to_dense(const LowerTriangular& m);

Real frobenius_norm(const Matrix& m);
Real frobenius_norm(const SymMatrix& m);

/// max_ij |a_ij - b_ij|
Real max_abs_diff(const Matrix& a, const Matrix& b);
Real max_abs_diff(const SymMatrix& a, const SymMatrix& b);
Real max_abs_diff(const LowerTriangular& a, const LowerTriangular& b);

}  // namespace qbound

#endif  // QBOUND_MATRIX_HPP
