#include "qbound/moments.hpp"

#include <fstream>
#include <sstream>

#include "qbound/errors.hpp"
#include "qbound/linalg.hpp"
#include "qbound/quadrature.hpp"

namespace qbound {

namespace {

void check_delta(const Real& delta) {
  if (!(delta > Real(0L))) throw InvalidConfig("delta must be positive");
}

// Piecewise-linear interpolant of a tabulated function, clamped to the grid.
Real interp_linear(const std::vector<Real>& xs, const std::vector<Real>& fs, const Real& x) {
  if (x <= xs.front()) return fs.front();
  if (x >= xs.back()) return fs.back();
  std::size_t lo = 0, hi = xs.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (xs[mid] <= x) lo = mid; else hi = mid;
  }
  const Real t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return fs[lo] + t * (fs[hi] - fs[lo]);
}

// Exact moments of the piecewise-linear interpolant:
// Int (a + b x) x^mu dx over each cell, summed in ascending cell order.
std::vector<Real> table_raw_moments(const std::vector<Real>& xs, const std::vector<Real>& fs,
                                    std::size_t mu_max) {
  std::vector<Real> m(mu_max + 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Real& x0 = xs[i];
    const Real& x1 = xs[i + 1];
    const Real h = x1 - x0;
    if (h.is_zero()) continue;
    const Real b = (fs[i + 1] - fs[i]) / h;
    const Real a = fs[i] - b * x0;
    Real p0 = x0, p1 = x1;  // x^{mu+1} running powers
    for (std::size_t mu = 0; mu <= mu_max; ++mu) {
      const Real q0 = p0 * x0, q1 = p1 * x1;
      // Int x^mu = (x1^{mu+1}-x0^{mu+1})/(mu+1); Int x^{mu+1} likewise
      m[mu] += a * (p1 - p0) / Real(mu + 1) + b * (q1 - q0) / Real(mu + 2);
      p0 = q0;
      p1 = q1;
    }
  }
  return m;
}

// phi'_mu for a density shifted by c: sum_j C(mu,j) c^{mu-j} phi_j.
std::vector<Real> shift_moments(const std::vector<Real>& phi, const Real& c) {
  std::vector<Real> out(phi.size());
  for (std::size_t mu = 0; mu < phi.size(); ++mu) {
    Real s;
    Real cpow(1L);
    for (std::size_t k = 0; k <= mu; ++k) {
      // k counts powers of c; pair with phi_{mu-k}
      s += binomial(mu, k) * cpow * phi[mu - k];
      cpow *= c;
    }
    out[mu] = s;
  }
  return out;
}

}  // namespace

ObjectModel ObjectModel::gaussian(Real delta, Real center) {
  check_delta(delta);
  ObjectModel o;
  o.kind = ObjectKind::gaussian;
  o.delta = std::move(delta);
  o.center = std::move(center);
  return o;
}

ObjectModel ObjectModel::uniform(Real delta, Real center) {
  check_delta(delta);
  ObjectModel o;
  o.kind = ObjectKind::uniform;
  o.delta = std::move(delta);
  o.center = std::move(center);
  return o;
}

ObjectModel ObjectModel::points(Real delta, std::vector<Real> x, std::vector<Real> w) {
  check_delta(delta);
  if (x.empty() || x.size() != w.size()) throw InvalidConfig("constellation needs matching x/w");
  Real sum;
  for (const Real& wi : w) {
    if (!(wi > Real(0L))) throw InvalidConfig("constellation weights must be positive");
    sum += wi;
  }
  for (Real& wi : w) wi /= sum;
  ObjectModel o;
  o.kind = ObjectKind::points;
  o.delta = std::move(delta);
  o.point_x = std::move(x);
  o.point_w = std::move(w);
  return o;
}

ObjectModel ObjectModel::table(Real delta, std::vector<Real> x, std::vector<Real> f) {
  check_delta(delta);
  if (x.size() < 2 || x.size() != f.size()) throw InvalidConfig("table needs >= 2 (x,f) rows");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1])) throw InvalidConfig("table x values must be strictly increasing");
  for (const Real& fi : f)
    if (fi < Real(0L)) throw InvalidConfig("table density must be nonnegative");
  ObjectModel o;
  o.kind = ObjectKind::table;
  o.delta = std::move(delta);
  o.grid_x = std::move(x);
  o.grid_f = std::move(f);
  // normalization check, then exact renormalization
  const Real norm = table_raw_moments(o.grid_x, o.grid_f, 0)[0];
  if (abs(norm - Real(1L)) > Real(1e-6)) throw QuadratureFailure("table density does not normalize to 1");
  for (Real& fi : o.grid_f) fi /= norm;
  return o;
}

ObjectModel ObjectModel::table_from_csv(Real delta, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open table file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "x,f")
    throw InvalidConfig("table CSV must start with header `x,f`: " + path);
  std::vector<Real> xs, fs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidConfig("malformed table row: " + line);
    xs.emplace_back(line.substr(0, comma));
    fs.emplace_back(line.substr(comma + 1));
  }
  return table(std::move(delta), std::move(xs), std::move(fs));
}

MomentVector moment_sequence(const ObjectModel& obj, std::size_t mu_max) {
  std::vector<Real> phi(mu_max + 1);
  switch (obj.kind) {
    case ObjectKind::gaussian:
      // standard normal: (mu-1)!! for even mu, 0 for odd
      for (std::size_t mu = 0; mu <= mu_max; ++mu)
        phi[mu] = (mu % 2 == 0) ? double_factorial(static_cast<long>(mu) - 1) : Real(0L);
      break;
    case ObjectKind::uniform:
      for (std::size_t mu = 0; mu <= mu_max; ++mu)
        phi[mu] = (mu % 2 == 0) ? Real(1L) / Real(mu + 1) : Real(0L);
      break;
    case ObjectKind::points:
      for (std::size_t s = 0; s < obj.point_x.size(); ++s) {
        Real xpow(1L);
        for (std::size_t mu = 0; mu <= mu_max; ++mu) {
          fma_add(phi[mu], obj.point_w[s], xpow);
          xpow *= obj.point_x[s];
        }
      }
      break;
    case ObjectKind::table:
      phi = table_raw_moments(obj.grid_x, obj.grid_f, mu_max);
      break;
  }
  if (!obj.center.is_zero() && obj.kind != ObjectKind::points && obj.kind != ObjectKind::table)
    phi = shift_moments(phi, obj.center);
  phi[0] = Real(1L);
  MomentVector mv;
  mv.mu_max = mu_max;
  mv.delta = obj.delta;
  mv.phi = std::move(phi);
  mv.theta.resize(mu_max + 1);
  Real dpow(1L);
  for (std::size_t mu = 0; mu <= mu_max; ++mu) {
    mv.theta[mu] = mv.phi[mu] * dpow;
    dpow *= obj.delta;
  }
  return mv;
}

HankelSet hankel(const MomentVector& moments, std::size_t q_max) {
  if (2 * q_max > moments.mu_max)
    throw InsufficientOrder("hankel needs moments to order 2*q_max = " +
                            std::to_string(2 * q_max));
  HankelSet h;
  h.q_max = q_max;
  h.delta = moments.delta;
  h.theta = SymMatrix(q_max + 1);
  h.xi = SymMatrix(q_max + 1);
  for (std::size_t q = 0; q <= q_max; ++q)
    for (std::size_t p = 0; p <= q; ++p) {
      h.theta(q, p) = moments.theta[q + p];
      h.xi(q, p) = moments.phi[q + p];
    }
  try {
    chol(h.xi);
    h.positive_definite = true;
  } catch (const NotPositiveDefinite& e) {
    h.positive_definite = false;
    h.fail_order = e.pivot_index;
  }
  return h;
}

std::vector<Real> hankel_smallest_eigenvalues(const ObjectModel& obj, std::size_t q_max) {
  if (!obj.infinite_support())
    throw FiniteSupport("smallest-eigenvalue sequence needs an infinite-support object");
  const MomentVector mv = moment_sequence(obj, 2 * q_max);
  const HankelSet h = hankel(mv, q_max);
  const Real guard = pow2(-static_cast<long>(precision_bits() / 2));
  std::vector<Real> lambda(q_max + 1);
  for (std::size_t q = 0; q <= q_max; ++q) {
    lambda[q] = smallest_eigenvalue(h.xi.leading(q));
    if (lambda[q] <= guard)
      throw PrecisionExhausted("lambda_" + std::to_string(q) +
                               " underflows the precision guard; raise precision");
  }
  return lambda;
}

SzegoFit szego_fit(const ObjectModel& obj, std::size_t q_lo, std::size_t q_hi) {
  if (q_lo < 1 || q_hi < q_lo || q_hi - q_lo + 1 < 8)
    throw InsufficientOrder("szego_fit needs a q range spanning >= 8 orders with q_lo >= 1");
  SzegoFit fit;
  fit.model = (obj.kind == ObjectKind::gaussian) ? SzegoModel::gaussian
                                                 : SzegoModel::compact_support;
  fit.q_lo = q_lo;
  fit.q_hi = q_hi;
  const std::vector<Real> all = hankel_smallest_eigenvalues(obj, q_hi);
  fit.lambda.assign(all.begin() + static_cast<long>(q_lo), all.end());
  // Least squares of y = ln lambda_q - c ln q against 1 and t(q),
  // with (c, t) = (1/2, q) for compact support and (1/4, sqrt(q)) for gaussian.
  const bool gauss = fit.model == SzegoModel::gaussian;
  const Real c = gauss ? Real(0.25) : Real(0.5);
  std::vector<Real> t, y;
  for (std::size_t q = q_lo; q <= q_hi; ++q) {
    const Real rq(q);
    t.push_back(gauss ? sqrt(rq) : rq);
    y.push_back(log(fit.lambda[q - q_lo]) - c * log(rq));
  }
  Real st, sy, stt, sty;
  const Real n(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    fma_add(stt, t[i], t[i]);
    fma_add(sty, t[i], y[i]);
  }
  const Real slope = (n * sty - st * sy) / (n * stt - st * st);
  const Real intercept = (sy - slope * st) / n;
  fit.omega = exp(intercept);
  fit.tau = exp(slope);
  for (std::size_t i = 0; i < t.size(); ++i)
    fit.residual = max(fit.residual, abs(y[i] - (intercept + slope * t[i])));
  return fit;
}

Real szego_integral(const ObjectModel& obj) {
  if (obj.kind != ObjectKind::table)
    throw InvalidConfig("szego_integral expects a table-density object");
  for (const Real& f : obj.grid_f)
    if (!(f > Real(0L))) throw NotInClass("density touches zero; S = -infinity");
  const Real x1 = obj.grid_x.front();
  const Real x2 = obj.grid_x.back();
  const Real mid = (x1 + x2) / Real(2L);
  const Real half = (x2 - x1) / Real(2L);
  // x = mid + half cos(theta) removes the endpoint singularity
  auto integrand = [&](const Real& th) {
    return log(interp_linear(obj.grid_x, obj.grid_f, mid + half * cos(th)));
  };
  return integrate(integrand, Real(0L), const_pi()).value;
}

}  // namespace qbound
