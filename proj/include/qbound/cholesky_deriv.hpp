#ifndef QBOUND_CHOLESKY_DERIV_HPP
#define QBOUND_CHOLESKY_DERIV_HPP

#include <cstddef>
#include <vector>

#include "qbound/matrix.hpp"
#include "qbound/moments.hpp"
#include "qbound/real.hpp"

namespace qbound {

/// Cholesky factors of the moment Hankel matrices:
/// Theta = Lambda Lambda^T (physical), Xi = V V^T (normalized),
/// Lambda_qr = delta^q V_qr.
struct CholeskyPair {
  std::size_t q_max = 0;
  Real delta{1L};
  LowerTriangular lambda;
  LowerTriangular v;
};

/// Explicit recursion on the Hankel entries, starting from
/// Lambda_00 = sqrt(theta_0) = 1.
CholeskyPair cholesky_factor(const HankelSet& h);

enum class DerivMethod { recursive, sarkka };

/// d Lambda / d theta_mu, holding all other theta_nu fixed.
/// Rows q < ceil(mu/2) are identically zero.
struct CholeskyDerivative {
  std::size_t mu = 0;
  DerivMethod method = DerivMethod::recursive;
  LowerTriangular dlambda;
};

/// Differentiated Cholesky recursion, evaluated row by row.
CholeskyDerivative derivative_recursive(const CholeskyPair& pair, std::size_t mu);

/// Half-lower-mask formula Lambda_{qr,mu} = delta^{q-mu} sum_s V_qs T_sr Q_sr
/// with Q = V^{-1} dTheta V^{-T} formed by two triangular solves.
CholeskyDerivative derivative_sarkka(const CholeskyPair& pair, std::size_t mu);

struct EntrySlope {
  std::size_t q = 0, r = 0;
  double slope = 0.0;      // fitted log-log slope vs delta
  double predicted = 0.0;  // q for Lambda entries, q - mu for derivatives
  bool leading = false;    // designated leading entry of the structure lemma
};

/// Fitted scaling exponents of Lambda and Lambda_{,mu} entries over a
/// geometric delta sweep.  Entries that vanish identically are omitted.
struct StructureReport {
  std::size_t mu = 0;
  std::size_t q_max = 0;
  double leading_exponent = 0.0;  // -mu/2 (even) or -(mu-1)/2 (odd)
  std::vector<EntrySlope> lambda_slopes;
  std::vector<EntrySlope> deriv_slopes;
};

StructureReport structure_orders(const ObjectModel& prototype, std::size_t mu, std::size_t q_max,
                                 const std::vector<Real>& deltas);

/// Same object with a different width.
ObjectModel with_delta(const ObjectModel& obj, Real delta);

}  // namespace qbound

#endif  // QBOUND_CHOLESKY_DERIV_HPP
