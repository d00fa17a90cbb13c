#ifndef QBOUND_MOMENTS_HPP
#define QBOUND_MOMENTS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qbound/matrix.hpp"
#include "qbound/real.hpp"

namespace qbound {

enum class ObjectKind { gaussian, uniform, points, table };

/// Normalized object intensity with characteristic width delta.
/// Positions, grids and the optional center offset are in normalized
/// coordinates x = X/delta; the gaussian model has unit normalized
/// variance, the uniform model has support [-1,1].
struct ObjectModel {
  ObjectKind kind = ObjectKind::gaussian;
  Real delta{1L};
  Real center{0L};  // normalized offset; 0 = centered

  // points
  std::vector<Real> point_x;
  std::vector<Real> point_w;

  // table density on a uniform grid over [grid_x.front(), grid_x.back()]
  std::vector<Real> grid_x;
  std::vector<Real> grid_f;

  bool infinite_support() const {
    return kind == ObjectKind::gaussian || kind == ObjectKind::uniform ||
           kind == ObjectKind::table;
  }

  static ObjectModel gaussian(Real delta, Real center = Real(0L));
  static ObjectModel uniform(Real delta, Real center = Real(0L));
  static ObjectModel points(Real delta, std::vector<Real> x, std::vector<Real> w);
  static ObjectModel table(Real delta, std::vector<Real> x, std::vector<Real> f);
  /// Two-column CSV with header `x,f`; density is checked for
  /// normalization and renormalized exactly.
  static ObjectModel table_from_csv(Real delta, const std::string& path);
};

/// theta_mu = phi_mu * delta^mu, with theta_0 = phi_0 = 1.
struct MomentVector {
  std::size_t mu_max = 0;
  Real delta{1L};
  std::vector<Real> phi;    // phi[mu], 0..mu_max
  std::vector<Real> theta;  // theta[mu] = phi[mu] * delta^mu
};

MomentVector moment_sequence(const ObjectModel& obj, std::size_t mu_max);

/// Hankel matrices Theta_qp = theta_{q+p} (physical) and Xi_qp = phi_{q+p}
/// (normalized), with Theta = D Xi D, D = diag(delta^q).
struct HankelSet {
  std::size_t q_max = 0;
  Real delta{1L};
  SymMatrix theta;  // (q_max+1) x (q_max+1)
  SymMatrix xi;
  bool positive_definite = false;
  std::size_t fail_order = 0;  // first failing pivot when not positive-definite
};

HankelSet hankel(const MomentVector& moments, std::size_t q_max);

enum class SzegoModel { compact_support, gaussian };

/// lambda_q ~ Omega sqrt(q) tau^q (compact support) or
/// lambda_q ~ Omega q^{1/4} tau^{sqrt(q)} (gaussian).
struct SzegoFit {
  SzegoModel model = SzegoModel::compact_support;
  std::size_t q_lo = 0, q_hi = 0;
  std::vector<Real> lambda;  // lambda[i] for q = q_lo + i
  Real omega{0L};
  Real tau{0L};
  Real residual{0L};  // max |log lambda_q - log model| over the fit range
};

SzegoFit szego_fit(const ObjectModel& obj, std::size_t q_lo, std::size_t q_hi);

/// Smallest eigenvalue of Xi_(q) for q = 0..q_max, with the precision
/// underflow guard lambda_q > 2^{-precision/2}.
std::vector<Real> hankel_smallest_eigenvalues(const ObjectModel& obj, std::size_t q_max);

/// S = Int ln f(x) / sqrt((x-x1)(x2-x)) dx for a table density,
/// via the substitution x = mid + half*cos(theta).
Real szego_integral(const ObjectModel& obj);

}  // namespace qbound

#endif  // QBOUND_MOMENTS_HPP
