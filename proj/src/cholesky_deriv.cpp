#include "qbound/cholesky_deriv.hpp"

#include <cmath>
#include <limits>

#include "qbound/errors.hpp"
#include "qbound/linalg.hpp"

namespace qbound {

namespace {

// Cholesky of a Hankel matrix via the explicit recursion; row-major,
// ascending summation.
LowerTriangular hankel_chol(const SymMatrix& h) {
  const std::size_t n = h.size();
  LowerTriangular l(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t r = 0; r <= q; ++r) {
      if (r == q) {
        Real s = h(q, q);
        for (std::size_t k = 0; k < q; ++k) fma_sub(s, l.at(q, k), l.at(q, k));
        if (s <= Real(0L)) throw NotPositiveDefinite(q);
        l.at(q, q) = sqrt(s);
      } else {
        Real s = h(q, r);
        for (std::size_t k = 0; k < r; ++k) fma_sub(s, l.at(q, k), l.at(r, k));
        l.at(q, r) = s / l.at(r, r);
      }
    }
  }
  return l;
}

}  // namespace

CholeskyPair cholesky_factor(const HankelSet& h) {
  if (!h.positive_definite) throw NotPositiveDefinite(h.fail_order);
  CholeskyPair pair;
  pair.q_max = h.q_max;
  pair.delta = h.delta;
  pair.lambda = hankel_chol(h.theta);
  pair.v = hankel_chol(h.xi);
  return pair;
}

CholeskyDerivative derivative_recursive(const CholeskyPair& pair, std::size_t mu) {
  const std::size_t n = pair.q_max + 1;
  if (mu > 2 * pair.q_max) throw InsufficientOrder("mu exceeds 2*q_max");
  const LowerTriangular& l = pair.lambda;
  CholeskyDerivative d;
  d.mu = mu;
  d.method = DerivMethod::recursive;
  d.dlambda = LowerTriangular(n);
  LowerTriangular& dl = d.dlambda;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t r = 0; r <= q; ++r) {
      if (r == q) {
        Real s = (2 * q == mu) ? Real(1L) : Real(0L);
        for (std::size_t k = 0; k < q; ++k) {
          Real t = l.at(q, k) * dl.at(q, k);
          s -= t + t;
        }
        dl.at(q, q) = s / (Real(2L) * l.at(q, q));
      } else {
        Real s = (q + r == mu) ? Real(1L) : Real(0L);
        for (std::size_t k = 0; k < r; ++k) {
          fma_sub(s, dl.at(q, k), l.at(r, k));
          fma_sub(s, l.at(q, k), dl.at(r, k));
        }
        fma_sub(s, l.at(q, r), dl.at(r, r));
        dl.at(q, r) = s / l.at(r, r);
      }
    }
  }
  return d;
}

CholeskyDerivative derivative_sarkka(const CholeskyPair& pair, std::size_t mu) {
  const std::size_t n = pair.q_max + 1;
  if (mu > 2 * pair.q_max) throw InsufficientOrder("mu exceeds 2*q_max");
  const LowerTriangular& v = pair.v;
  // Q = V^{-1} E V^{-T} with E_qr = delta_mu^{q+r}; two forward
  // substitutions, V is never inverted explicitly.
  Matrix y(n, n);  // Y = V^{-1} E
  {
    std::vector<Real> col(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = (i + j == mu) ? Real(1L) : Real(0L);
      const std::vector<Real> x = solve_lower(v, col);
      for (std::size_t i = 0; i < n; ++i) y(i, j) = x[i];
    }
  }
  Matrix q(n, n);  // Q = (V^{-1} Y^T)^T, symmetric
  {
    std::vector<Real> col(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = y(j, i);
      const std::vector<Real> x = solve_lower(v, col);
      for (std::size_t i = 0; i < n; ++i) q(j, i) = x[i];
    }
  }
  CholeskyDerivative d;
  d.mu = mu;
  d.method = DerivMethod::sarkka;
  d.dlambda = LowerTriangular(n);
  // delta^{q-mu} prefactor; mu can exceed q, so walk the exponent explicitly
  for (std::size_t row = 0; row < n; ++row) {
    const Real pref = pow(pair.delta, static_cast<long>(row) - static_cast<long>(mu));
    for (std::size_t r = 0; r <= row; ++r) {
      // T mask: 0 below s=r, 1/2 at s=r, 1 above
      Real s = v.at(row, r) * q(r, r) / Real(2L);
      for (std::size_t k = r + 1; k <= row; ++k) fma_add(s, v.at(row, k), q(k, r));
      d.dlambda.at(row, r) = pref * s;
    }
  }
  return d;
}

ObjectModel with_delta(const ObjectModel& obj, Real delta) {
  ObjectModel o = obj;
  if (!(delta > Real(0L))) throw InvalidConfig("delta must be positive");
  o.delta = std::move(delta);
  return o;
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

StructureReport structure_orders(const ObjectModel& prototype, std::size_t mu, std::size_t q_max,
                                 const std::vector<Real>& deltas) {
  if (deltas.size() < 3) throw InvalidConfig("delta sweep needs >= 3 values");
  StructureReport rep;
  rep.mu = mu;
  rep.q_max = q_max;
  const bool even = mu % 2 == 0;
  rep.leading_exponent = even ? -static_cast<double>(mu) / 2.0
                              : -(static_cast<double>(mu) - 1.0) / 2.0;
  const std::size_t q_lead = even ? mu / 2 : (mu + 1) / 2;

  const std::size_t n = q_max + 1;
  std::vector<double> logd;
  std::vector<std::vector<double>> loglam(n * n), logder(n * n);
  for (const Real& delta : deltas) {
    const ObjectModel obj = with_delta(prototype, delta);
    const MomentVector mv = moment_sequence(obj, 2 * q_max);
    const CholeskyPair pair = cholesky_factor(hankel(mv, q_max));
    const CholeskyDerivative d = derivative_recursive(pair, mu);
    logd.push_back(std::log(delta.to_double()));
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r <= q; ++r) {
        const Real& lv = pair.lambda.at(q, r);
        const Real& dv = d.dlambda.at(q, r);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        loglam[q * n + r].push_back(lv.is_zero() ? nan : std::log(std::abs(lv.to_double())));
        logder[q * n + r].push_back(dv.is_zero() ? nan : std::log(std::abs(dv.to_double())));
      }
  }
  // an entry that vanished for any delta in the sweep is treated as zero
  auto all_nonzero = [&](const std::vector<double>& ys) {
    for (double y : ys)
      if (std::isnan(y)) return false;
    return true;
  };
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r <= q; ++r) {
      if (all_nonzero(loglam[q * n + r])) {
        EntrySlope e;
        e.q = q;
        e.r = r;
        e.slope = fit_slope(logd, loglam[q * n + r]);
        e.predicted = static_cast<double>(q);
        rep.lambda_slopes.push_back(e);
      }
      if (all_nonzero(logder[q * n + r])) {
        EntrySlope e;
        e.q = q;
        e.r = r;
        e.slope = fit_slope(logd, logder[q * n + r]);
        e.predicted = static_cast<double>(q) - static_cast<double>(mu);
        e.leading = even ? (q == q_lead && r == q_lead)
                         : (q == q_lead && (r == q_lead || r + 1 == q_lead));
        rep.deriv_slopes.push_back(e);
      }
    }
  return rep;
}

}  // namespace qbound
