#ifndef QBOUND_LINALG_HPP
#define QBOUND_LINALG_HPP

#include <vector>

#include "qbound/matrix.hpp"
#include "qbound/real.hpp"

namespace qbound {

/// Cholesky factorization M = L L^T of a positive-definite matrix.
/// Throws NotPositiveDefinite(pivot) when a pivot is nonpositive.
LowerTriangular chol(const SymMatrix& m);

struct EigenSystem {
  std::vector<Real> values;  // ascending
  Matrix vectors;            // columns are eigenvectors, same order
};

/// Cyclic Jacobi diagonalization; iteration cap 100 sweeps.
EigenSystem sym_eigen(const SymMatrix& m);

/// Smallest eigenvalue only (same Jacobi sweep).
Real smallest_eigenvalue(const SymMatrix& m);

/// Solve rhs = (L*gamma + gamma*L)/2 for symmetric L, with gamma
/// positive-definite, via the eigenbasis formula
/// L_jl = 2 (e_j^T rhs e_l) / (gamma_j + gamma_l).
SymMatrix lyap_solve(const SymMatrix& gamma, const SymMatrix& rhs);
SymMatrix lyap_solve(const EigenSystem& gamma_eigen, const SymMatrix& rhs);

/// Forward substitution: solve L x = b for lower-triangular L.
std::vector<Real> solve_lower(const LowerTriangular& l, const std::vector<Real>& b);

}  // namespace qbound

#endif  // QBOUND_LINALG_HPP
