#include "qbound/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "qbound/errors.hpp"

namespace qbound {

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Real& s = c(i, j);
      for (std::size_t k = 0; k < a.cols(); ++k) fma_add(s, a(i, k), b(k, j));
    }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

SymMatrix gram(const LowerTriangular& l) {
  const std::size_t n = l.size();
  SymMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      Real& s = g(i, j);
      for (std::size_t k = 0; k <= j; ++k) fma_add(s, l.at(i, k), l.at(j, k));
    }
  return g;
}

Matrix to_dense(const SymMatrix& m) {
  Matrix d(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) d(i, j) = m(i, j);
  return d;
}

Matrix to_dense(const LowerTriangular& m) {
  Matrix d(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) d(i, j) = m.at(i, j);
  return d;
}

Real frobenius_norm(const Matrix& m) {
  Real s;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) fma_add(s, m(i, j), m(i, j));
  return sqrt(s);
}

Real frobenius_norm(const SymMatrix& m) { return frobenius_norm(to_dense(m)); }

Real max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("max_abs_diff");
  Real m;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = max(m, abs(a(i, j) - b(i, j)));
  return m;
}

Real max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  return max_abs_diff(to_dense(a), to_dense(b));
}

Real max_abs_diff(const LowerTriangular& a, const LowerTriangular& b) {
  return max_abs_diff(to_dense(a), to_dense(b));
}

LowerTriangular chol(const SymMatrix& m) {
  const std::size_t n = m.size();
  LowerTriangular l(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Real s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) fma_sub(s, l.at(i, k), l.at(j, k));
      if (j == i) {
        if (s <= Real(0L)) throw NotPositiveDefinite(i);
        l.at(i, i) = sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return l;
}

namespace {

// One Jacobi rotation in the (p,q) plane, updating A (full dense copy of
// the symmetric matrix) and accumulating into V.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const Real apq = a(p, q);
  if (apq.is_zero()) return;
  const Real theta = (a(q, q) - a(p, p)) / (Real(2L) * apq);
  Real t;
  {
    const Real at = abs(theta);
    t = Real(1L) / (at + sqrt(theta * theta + Real(1L)));
    if (theta.is_negative()) t = -t;
  }
  const Real c = Real(1L) / sqrt(t * t + Real(1L));
  const Real s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Real akp = a(k, p);
    const Real akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Real apk = a(p, k);
    const Real aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Real vkp = v(k, p);
    const Real vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

Real offdiag_norm(const Matrix& a) {
  Real s;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) fma_add(s, a(i, j), a(i, j));
  return sqrt(s);
}

constexpr std::size_t kJacobiSweepCap = 100;

}  // namespace

EigenSystem sym_eigen(const SymMatrix& m) {
  const std::size_t n = m.size();
  Matrix a = to_dense(m);
  Matrix v = Matrix::identity(n);
  const Real norm = frobenius_norm(a);
  const Real tol = norm * pow2(-static_cast<long>(precision_bits()) + 6);
  if (n > 1 && !norm.is_zero()) {
    std::size_t sweep = 0;
    while (offdiag_norm(a) > tol) {
      if (++sweep > kJacobiSweepCap) throw NoConvergence(kJacobiSweepCap);
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenSystem es;
  es.values.resize(n);
  es.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    es.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, j) = v(i, order[j]);
  }
  return es;
}

Real smallest_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values.front(); }

SymMatrix lyap_solve(const EigenSystem& ge, const SymMatrix& rhs) {
  const std::size_t n = ge.values.size();
  if (rhs.size() != n) throw DimensionMismatch("lyap_solve");
  for (std::size_t j = 0; j < n; ++j)
    if (ge.values[j] <= Real(0L)) throw NotPositiveDefinite(j);
  // Ltilde_jl = 2 (e_j^T rhs e_l) / (gamma_j + gamma_l), then rotate back.
  Matrix et_r(n, n);
  const Matrix r = to_dense(rhs);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      Real& s = et_r(j, k);
      for (std::size_t i = 0; i < n; ++i) fma_add(s, ge.vectors(i, j), r(i, k));
    }
  Matrix lt(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) {
      Real s;
      for (std::size_t k = 0; k < n; ++k) fma_add(s, et_r(j, k), ge.vectors(k, l));
      lt(j, l) = Real(2L) * s / (ge.values[j] + ge.values[l]);
    }
  const Matrix dense = ge.vectors * lt * transpose(ge.vectors);
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      out(i, j) = (dense(i, j) + dense(j, i)) / Real(2L);
  return out;
}

SymMatrix lyap_solve(const SymMatrix& gamma, const SymMatrix& rhs) {
  return lyap_solve(sym_eigen(gamma), rhs);
}

std::vector<Real> solve_lower(const LowerTriangular& l, const std::vector<Real>& b) {
  const std::size_t n = l.size();
  if (b.size() != n) throw DimensionMismatch("solve_lower");
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real s = b[i];
    for (std::size_t k = 0; k < i; ++k) fma_sub(s, l.at(i, k), x[k]);
    x[i] = s / l.at(i, i);
  }
  return x;
}

}  // namespace qbound
