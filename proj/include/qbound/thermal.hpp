#ifndef QBOUND_THERMAL_HPP
#define QBOUND_THERMAL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbound/linalg.hpp"
#include "qbound/matrix.hpp"
#include "qbound/real.hpp"

namespace qbound {

/// Real-symmetric mutual coherence matrix Gamma(theta) together with
/// its parameter derivatives.
struct ThermalModel {
  SymMatrix gamma;
  std::vector<SymMatrix> dgamma;  // one per parameter

  std::size_t modes() const { return gamma.size(); }
  std::size_t params() const { return dgamma.size(); }
  Real epsilon() const;  // tr Gamma
  /// Normalized model g = Gamma/eps, g_{,mu} = Gamma_{,mu}/eps.
  ThermalModel normalized() const;
  /// Gamma scaled to a target eps with the shape held fixed.
  ThermalModel with_epsilon(const Real& eps) const;
};

/// Exact thermal-state QFI:
/// K_{mu nu} = sum_{j,l} 2 (e_j' G_mu e_l)(e_l' G_nu e_j) /
///             (gamma_j + gamma_l + 2 gamma_j gamma_l).
SymMatrix thermal_qfi(const ThermalModel& model);

/// SLD-relaxed bound K_{mu nu}(Gamma) = tr Gamma_{,mu} L_nu / tr Gamma
/// with L from the Lyapunov equation Gamma_{,mu} = (L Gamma + Gamma L)/2.
SymMatrix sld_qfi(const ThermalModel& model);

/// kappa(eps) = K(rho)/eps sampled on an ascending eps grid (shape of
/// Gamma held fixed).  kappa(0+) equals sld_qfi of the normalized model.
std::vector<SymMatrix> kappa_curve(const ThermalModel& model, const std::vector<Real>& eps_grid);

/// Infrared limit J(Phi)_{mu nu} = tr Gamma_{,mu} Gamma^{-1} Gamma_{,nu} Gamma^{-1}.
SymMatrix infrared_fisher(const ThermalModel& model);

/// Seeded random SPD test model: Gamma = I + c S with a random symmetric
/// S, |S_ij| <= 1, plus random symmetric derivative directions.
ThermalModel make_random_model(std::uint64_t seed, std::size_t n, std::size_t nparams);

/// A - B is PSD up to the eigenvalue floor.
bool psd_difference(const SymMatrix& a, const SymMatrix& b, const Real& floor);

}  // namespace qbound

#endif  // QBOUND_THERMAL_HPP
