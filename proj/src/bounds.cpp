#include "qbound/bounds.hpp"

#include <algorithm>

#include "qbound/errors.hpp"
#include "qbound/linalg.hpp"

namespace qbound {

namespace {

// (A B^T)_{ts} = sum_r A_tr B_sr for lower-triangular A, B.
Real lowtri_product_entry(const LowerTriangular& a, const LowerTriangular& b, std::size_t t,
                          std::size_t s) {
  Real sum;
  const std::size_t r_max = std::min(t, s);
  for (std::size_t r = 0; r <= r_max; ++r) fma_add(sum, a.at(t, r), b.at(s, r));
  return sum;
}

// tr Pi A B^T with fixed row-major ascending order.
Real pi_trace(const SymMatrix& pi, const LowerTriangular& a, const LowerTriangular& b) {
  Real sum;
  const std::size_t n = pi.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if ((s + t) % 2 != 0) continue;  // Pi vanishes on odd shells
      fma_add(sum, pi(s, t), lowtri_product_entry(a, b, t, s));
    }
  return sum;
}

}  // namespace

BoundResult k_tilde(const PiMatrix& pi, const CholeskyPair& pair, const CholeskyDerivative& dmu,
                    const CholeskyDerivative& dnu, const Real& rtol) {
  const std::size_t n = pi.q_max + 1;
  if (pair.q_max != pi.q_max || dmu.dlambda.size() != n || dnu.dlambda.size() != n)
    throw DimensionMismatch("k_tilde inputs must share q_max");
  BoundResult res;
  res.mu = dmu.mu;
  res.nu = dnu.mu;
  res.q_max = pi.q_max;
  const LowerTriangular& a = dmu.dlambda;
  const LowerTriangular& b = dnu.dlambda;
  // shell q gathers the (s,t) pairs with max(s,t) = q
  res.shell_increments.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    Real inc;
    for (std::size_t t = 0; t < q; ++t) {
      if ((q + t) % 2 != 0) continue;
      fma_add(inc, pi.pi(q, t),
              lowtri_product_entry(a, b, t, q) + lowtri_product_entry(a, b, q, t));
    }
    fma_add(inc, pi.pi(q, q), lowtri_product_entry(a, b, q, q));
    inc *= Real(4L);
    res.shell_increments.push_back(inc);
    res.value += inc;
  }
  res.norm_residual = abs(pi_trace(pi.pi, pair.lambda, pair.lambda) - Real(1L));
  res.b_mu_residual = abs(pi_trace(pi.pi, a, pair.lambda));
  res.verdict = Verdict::converged;
  const Real gate = rtol * abs(res.value);
  for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i)
    if (abs(res.shell_increments[i]) > gate) res.verdict = Verdict::inconclusive;
  return res;
}

BoundResult k_tilde_diag(const ObjectModel& obj, const OtfModel& otf, std::size_t mu,
                         std::size_t q_max, const Real& rtol) {
  if (!obj.infinite_support())
    throw FiniteSupport("K~ needs an infinite-support object; use the constellation bounds");
  const MomentVector mv = moment_sequence(obj, 2 * q_max);
  const CholeskyPair pair = cholesky_factor(hankel(mv, q_max));
  const CholeskyDerivative d = derivative_recursive(pair, mu);
  const PiMatrix pi = pi_matrix(otf, q_max, default_w(obj, otf));
  return k_tilde(pi, pair, d, d, rtol);
}

Real leading_order(const ObjectModel& obj, const OtfModel& otf, std::size_t mu) {
  if (mu < 1) throw InvalidConfig("leading_order needs mu >= 1");
  const std::size_t q = (mu + 1) / 2;
  const MomentVector mv = moment_sequence(obj, 2 * q);
  const CholeskyPair pair = cholesky_factor(hankel(mv, q));
  const std::vector<Real> m = otf_moments(otf, q);
  const Real qfac = factorial(q);
  if (mu % 2 == 0) {
    const Real& lqq = pair.lambda.at(q, q);
    return m[q] / (qfac * qfac * lqq * lqq);
  }
  const Real& lprev = pair.lambda.at(q - 1, q - 1);
  const Real ratio = pair.lambda.at(q, q - 1) / pair.lambda.at(q, q);
  return Real(4L) * m[q] / (qfac * qfac * lprev * lprev) * (Real(1L) + ratio * ratio);
}

TailReport tail_diagnostics(const ObjectModel& obj, const OtfModel& otf, std::size_t mu,
                            std::size_t q_max, const Real& w) {
  if (!(w > Real(0L))) throw InvalidConfig("w must be positive");
  const bool gg = obj.kind == ObjectKind::gaussian && otf.kind == OtfKind::gaussian;
  if (gg) {
    const Real lo = sqrt(Real(2L)) * obj.delta;
    const Real hi = Real(1L) / (sqrt(Real(2L)) * otf.beta);
    if (!(lo < w && w < hi))
      throw InvalidConfig("w outside the admissible gaussian/gaussian window");
  }
  TailReport rep;
  rep.mu = mu;
  rep.q_start = (mu + 1) / 2;
  rep.has_limit = gg;
  if (gg) rep.limit_ratio = Real(2L) * obj.delta * obj.delta / (w * w);
  const MomentVector mv = moment_sequence(obj, 2 * q_max);
  const std::vector<Real> lambda = hankel_smallest_eigenvalues(obj, q_max);
  const Real ratio2 = (obj.delta / w) * (obj.delta / w);
  Real pref = pow(ratio2, static_cast<long>(rep.q_start));
  for (std::size_t q = rep.q_start; q <= q_max; ++q) {
    rep.zeta.push_back(mv.phi[2 * q] / factorial(q) * pref / (lambda[q] * lambda[q]));
    pref *= ratio2;
  }
  for (std::size_t i = 0; i + 1 < rep.zeta.size(); ++i)
    rep.ratios.push_back(rep.zeta[i + 1] / rep.zeta[i]);
  // fit the eigenvalue decay law over the upper half of the q range:
  // ln lambda_q = ln Omega + c ln q + t(q) ln tau with (c, t) = (1/4, sqrt q)
  // for the gaussian object and (1/2, q) for compact support
  const bool gaussian_law = obj.kind == ObjectKind::gaussian;
  const Real c = gaussian_law ? Real(1L) / Real(4L) : Real(1L) / Real(2L);
  auto tfun = [&](std::size_t q) { return gaussian_law ? sqrt(Real(q)) : Real(q); };
  const std::size_t fit_lo = std::max(rep.q_start, q_max / 2);
  if (q_max >= fit_lo + 4) {
    Real st, sy, stt, sty, n;
    for (std::size_t q = fit_lo; q <= q_max; ++q) {
      const Real t = tfun(q);
      const Real y = log(lambda[q]) - c * log(Real(q));
      st += t; sy += y; fma_add(stt, t, t); fma_add(sty, t, y); n += Real(1L);
    }
    const Real slope = (n * sty - st * sy) / (n * stt - st * st);
    rep.tau_fit = exp(slope);
    for (std::size_t i = 0; i + 1 < rep.zeta.size(); ++i) {
      const std::size_t q = rep.q_start + i;
      const Real growth =
          pow(Real(q + 1) / Real(q), Real(2L) * c) * exp(Real(2L) * slope * (tfun(q + 1) - tfun(q)));
      rep.corrected_ratios.push_back(rep.ratios[i] * growth);
    }
  }
  return rep;
}

SnrResult qsnr(const ObjectModel& obj, const OtfModel& otf, std::size_t mu, const Real& n_photons,
               const BoundResult& bound) {
  if (bound.mu != mu || bound.nu != mu) throw DimensionMismatch("qsnr needs the diagonal bound for mu");
  SnrResult s;
  s.mu = mu;
  s.delta = obj.delta;
  s.n_photons = n_photons;
  const MomentVector mv = moment_sequence(obj, mu);
  s.qsnr = n_photons * bound.value * mv.theta[mu] * mv.theta[mu];
  if (mu % 2 == 0 && mu >= 2) {
    const std::size_t q = mu / 2;
    const MomentVector mv2 = moment_sequence(obj, 2 * q);
    const CholeskyPair pair = cholesky_factor(hankel(mv2, q));
    const std::vector<Real> m = otf_moments(otf, q);
    const std::vector<Real> lambda = hankel_smallest_eigenvalues(obj, q);
    const Real qfac = factorial(q);
    const Real& vqq = pair.v.at(q, q);
    s.has_prefactor = true;
    s.chi = m[q] * mv2.phi[2 * q] * mv2.phi[2 * q] / (qfac * qfac * vqq * vqq);
    s.chi_prime = factorial(2 * q) * pow(otf.beta, 2 * static_cast<long>(q)) /
                  (qfac * qfac * qfac * pow2(static_cast<long>(q)) * lambda[q]);
  }
  return s;
}

ConstellationBounds make_constellation_bounds(const ObjectModel& points_obj, const OtfModel& otf,
                                              std::size_t mu_max) {
  if (points_obj.kind != ObjectKind::points)
    throw InvalidConfig("constellation bounds need a point-constellation object");
  ConstellationBounds c;
  c.obj = points_obj;
  // even OTF: <k> = 0, so the variance is just <k^2>
  c.beta2 = otf_moments(otf, 1)[1];
  if (!(c.beta2 > Real(0L))) throw ZeroVariance();
  c.theta = moment_sequence(points_obj, 2 * mu_max);
  return c;
}

Real convexity_bound(const ConstellationBounds& c, std::size_t mu, const Real& n_photons) {
  if (mu < 1 || 2 * mu - 2 > c.theta.mu_max)
    throw InsufficientOrder("convexity bound needs theta_{2mu-2}");
  return Real(mu * mu) * c.theta.theta[2 * mu - 2] / (Real(4L) * n_photons * c.beta2);
}

Real classical_sim_bound(const ConstellationBounds& c, std::size_t mu, const Real& n_photons) {
  if (2 * mu > c.theta.mu_max) throw InsufficientOrder("classical-simulation bound needs theta_{2mu}");
  return c.theta.theta[2 * mu] / n_photons;
}

Real direct_imaging_fisher(const ObjectModel& obj, const OtfModel& otf, std::size_t mu,
                           const Real& n_photons, std::size_t trunc_order,
                           std::size_t grid_points) {
  if (otf.kind != OtfKind::gaussian)
    throw InvalidConfig("direct-imaging baseline is implemented for the gaussian OTF");
  if (mu > trunc_order) throw InvalidConfig("trunc_order must cover mu");
  const MomentVector mv = moment_sequence(obj, trunc_order);
  // |Psi|^2 gaussian with std beta -> intensity PSF h is gaussian with
  // sigma = 1/(2 beta)
  const Real sigma = Real(1L) / (Real(2L) * otf.beta);
  const Real two_pi = Real(2L) * const_pi();
  const Real hnorm = Real(1L) / (sqrt(two_pi) * sigma);
  // theta_nu / (nu! sigma^nu) coefficients of He_nu(x/sigma)
  std::vector<Real> coeff(trunc_order + 1);
  Real spow(1L);
  for (std::size_t nu = 0; nu <= trunc_order; ++nu) {
    coeff[nu] = mv.theta[nu] / (factorial(nu) * spow);
    spow *= sigma;
  }
  const Real half_width = Real(8L) * sigma;
  const Real step = Real(2L) * half_width / Real(grid_points - 1);
  const Real dcoeff = Real(1L) / (factorial(mu) * pow(sigma, static_cast<long>(mu)));
  std::vector<Real> he(trunc_order + 1);
  Real integral;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const Real x = -half_width + step * Real(i);
    const Real u = x / sigma;
    he[0] = Real(1L);
    if (trunc_order >= 1) he[1] = u;
    for (std::size_t nu = 1; nu < trunc_order; ++nu)
      he[nu + 1] = u * he[nu] - Real(nu) * he[nu - 1];
    Real dseries;  // P(x)/h(x)
    for (std::size_t nu = 0; nu <= trunc_order; ++nu) fma_add(dseries, coeff[nu], he[nu]);
    if (!(dseries > Real(0L)))
      throw NegativeIntensity("truncated intensity nonpositive at x = " + x.str(6) +
                              "; raise trunc_order or shrink delta");
    const Real h = hnorm * exp(-u * u / Real(2L));
    const Real num = he[mu] * dcoeff;  // h^{(mu)}(x)/mu! up to the sign, squared below
    const Real sample = h * num * num / dseries;
    // trapezoid on the uniform grid
    integral += (i == 0 || i + 1 == grid_points) ? sample / Real(2L) : sample;
  }
  return n_photons * integral * step;
}

}  // namespace qbound
