#ifndef QBOUND_BOUNDS_HPP
#define QBOUND_BOUNDS_HPP

#include <cstddef>
#include <vector>

#include "qbound/cholesky_deriv.hpp"
#include "qbound/moments.hpp"
#include "qbound/otf.hpp"
#include "qbound/real.hpp"

namespace qbound {

enum class Verdict { converged, inconclusive };

/// Truncated K~_{mu nu} = 4 tr Pi Lambda_{,mu} Lambda_{,nu}^T with
/// per-q-shell accumulation and the identity residuals attached.
struct BoundResult {
  std::size_t mu = 0, nu = 0;
  std::size_t q_max = 0;
  Real value{0L};
  Real norm_residual{0L};  // |tr Pi Lambda Lambda^T - 1|
  Real b_mu_residual{0L};  // |tr Pi Lambda_{,mu} Lambda^T|
  std::vector<Real> shell_increments;
  Verdict verdict = Verdict::inconclusive;
};

BoundResult k_tilde(const PiMatrix& pi, const CholeskyPair& pair, const CholeskyDerivative& dmu,
                    const CholeskyDerivative& dnu, const Real& rtol = Real(1e-8));

/// Convenience: full pipeline for one (object, otf, mu) diagonal entry.
BoundResult k_tilde_diag(const ObjectModel& obj, const OtfModel& otf, std::size_t mu,
                         std::size_t q_max, const Real& rtol = Real(1e-8));

/// Closed-form leading term from the exact Cholesky entries:
/// even mu: <k^{2q}> / (q!^2 Lambda_qq^2), q = mu/2;
/// odd mu: 4<k^{2q}>/(q!^2 Lambda_{q-1,q-1}^2) [1 + (Lambda_{q,q-1}/Lambda_qq)^2],
/// q = (mu+1)/2.
Real leading_order(const ObjectModel& obj, const OtfModel& otf, std::size_t mu);

/// zeta_q tail sequence and its empirical ratio test.  The raw ratio
/// carries the sub-exponential eigenvalue factor lambda_q^2/lambda_{q+1}^2,
/// which decays to 1 only as tau^{-1/sqrt(q)}; the corrected ratio divides
/// out the fitted eigenvalue law and converges to the limit at O(1/q).
struct TailReport {
  std::size_t mu = 0;
  std::size_t q_start = 0;            // ceil(mu/2)
  std::vector<Real> zeta;             // zeta[i] for q = q_start + i
  std::vector<Real> ratios;           // zeta_{q+1}/zeta_q
  std::vector<Real> corrected_ratios; // ratios * (model lambda_{q+1}/lambda_q)^2
  Real tau_fit{0L};                   // fitted decay base of lambda_q
  bool has_limit = false;             // gaussian object + gaussian OTF
  Real limit_ratio{0L};               // 2 delta^2 / w^2
};

TailReport tail_diagnostics(const ObjectModel& obj, const OtfModel& otf, std::size_t mu,
                            std::size_t q_max, const Real& w);

struct SnrResult {
  std::size_t mu = 0;
  Real delta{0L};
  Real n_photons{1L};
  Real qsnr{0L};  // N K~_{mu mu} theta_mu^2
  bool has_prefactor = false;  // even mu only
  Real chi{0L};
  Real chi_prime{0L};
};

SnrResult qsnr(const ObjectModel& obj, const OtfModel& otf, std::size_t mu, const Real& n_photons,
               const BoundResult& bound);

/// Point-constellation comparison bounds.
struct ConstellationBounds {
  ObjectModel obj;
  Real beta2{0L};      // OTF variance <k^2> - <k>^2
  MomentVector theta;  // moments to 2*mu_max
};

ConstellationBounds make_constellation_bounds(const ObjectModel& points_obj, const OtfModel& otf,
                                              std::size_t mu_max);

/// mu^2 theta_{2mu-2} / (4 N beta^2): mean-square-error lower bound.
Real convexity_bound(const ConstellationBounds& c, std::size_t mu, const Real& n_photons);

/// theta_{2mu} / N.
Real classical_sim_bound(const ConstellationBounds& c, std::size_t mu, const Real& n_photons);

/// Direct-imaging Fisher information J_{mu mu} for a gaussian OTF,
/// via the moment expansion of the image intensity on a fixed grid.
Real direct_imaging_fisher(const ObjectModel& obj, const OtfModel& otf, std::size_t mu,
                           const Real& n_photons, std::size_t trunc_order = 20,
                           std::size_t grid_points = 8192);

}  // namespace qbound

#endif  // QBOUND_BOUNDS_HPP
