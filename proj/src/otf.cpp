#include "qbound/otf.hpp"

#include <fstream>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

void check_beta(const Real& beta) {
  if (!(beta > Real(0L))) throw InvalidConfig("beta must be positive");
}

// Even raw moments of the tabulated |Psi|^2 via exact integration of the
// piecewise-linear interpolant (same scheme as the table object density).
std::vector<Real> table_even_moments(const std::vector<Real>& ks, const std::vector<Real>& psi2,
                                     std::size_t q_max) {
  std::vector<Real> m(q_max + 1);
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const Real& x0 = ks[i];
    const Real& x1 = ks[i + 1];
    const Real h = x1 - x0;
    if (h.is_zero()) continue;
    const Real b = (psi2[i + 1] - psi2[i]) / h;
    const Real a = psi2[i] - b * x0;
    // walk all integer powers of x^{n+1}, harvesting the even-n terms
    Real e0 = x0, e1 = x1;
    for (std::size_t n = 0; n <= 2 * q_max; ++n) {
      if (n % 2 == 0)
        m[n / 2] += a * (e1 - e0) / Real(n + 1) + b * (e1 * x1 - e0 * x0) / Real(n + 2);
      e0 *= x0;
      e1 *= x1;
    }
  }
  return m;
}

}  // namespace

OtfModel OtfModel::bandlimited(Real beta) {
  check_beta(beta);
  OtfModel o;
  o.kind = OtfKind::bandlimited;
  o.beta = std::move(beta);
  return o;
}

OtfModel OtfModel::gaussian(Real beta) {
  check_beta(beta);
  OtfModel o;
  o.kind = OtfKind::gaussian;
  o.beta = std::move(beta);
  return o;
}

OtfModel OtfModel::custom_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open OTF file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 6) != "k,psi2")
    throw InvalidConfig("OTF CSV must start with header `k,psi2`: " + path);
  std::vector<Real> ks, ps;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidConfig("malformed OTF row: " + line);
    ks.emplace_back(line.substr(0, comma));
    ps.emplace_back(line.substr(comma + 1));
  }
  if (ks.size() < 2) throw InvalidConfig("OTF table needs >= 2 rows");
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    if (!(ks[i] < ks[i + 1])) throw InvalidConfig("OTF k values must be strictly increasing");
  for (const Real& p : ps)
    if (p < Real(0L)) throw InvalidConfig("|Psi|^2 must be nonnegative");
  OtfModel o;
  o.kind = OtfKind::custom;
  o.grid_k = std::move(ks);
  o.grid_psi2 = std::move(ps);
  const Real norm = table_even_moments(o.grid_k, o.grid_psi2, 0)[0];
  if (!(norm > Real(0L))) throw InvalidConfig("OTF table integrates to zero");
  for (Real& p : o.grid_psi2) p /= norm;
  // effective bandwidth for diagnostics: sqrt(<k^2>)
  o.beta = sqrt(table_even_moments(o.grid_k, o.grid_psi2, 1)[1]);
  return o;
}

std::vector<Real> otf_moments(const OtfModel& otf, std::size_t q_max) {
  std::vector<Real> m(q_max + 1);
  switch (otf.kind) {
    case OtfKind::gaussian: {
      // (2q)!/(q! 2^q) beta^{2q} = (2q-1)!! beta^{2q}
      const Real b2 = otf.beta * otf.beta;
      Real bpow(1L);
      for (std::size_t q = 0; q <= q_max; ++q) {
        m[q] = double_factorial(2 * static_cast<long>(q) - 1) * bpow;
        bpow *= b2;
      }
      break;
    }
    case OtfKind::bandlimited: {
      const Real b2 = otf.beta * otf.beta;
      Real bpow(1L);
      for (std::size_t q = 0; q <= q_max; ++q) {
        m[q] = bpow / Real(2 * q + 1);
        bpow *= b2;
      }
      break;
    }
    case OtfKind::custom:
      m = table_even_moments(otf.grid_k, otf.grid_psi2, q_max);
      break;
  }
  return m;
}

PiMatrix pi_matrix(const OtfModel& otf, std::size_t q_max, const Real& w) {
  if (!(w > Real(0L))) throw InvalidConfig("w must be positive");
  PiMatrix out;
  out.q_max = q_max;
  out.kind = otf.kind;
  out.beta = otf.beta;
  out.w = w;
  out.moments = otf_moments(otf, q_max);
  out.pi = SymMatrix(q_max + 1);
  for (std::size_t p = 0; p <= q_max; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      if ((p + q) % 2 != 0) continue;  // odd moment of an even OTF
      const Real entry = out.moments[(p + q) / 2] / (factorial(p) * factorial(q));
      out.pi(p, q) = (((p - q) / 2) % 2 == 0) ? entry : -entry;
    }
  return out;
}

SymMatrix pi_tilde(const PiMatrix& pi) {
  const std::size_t n = pi.q_max + 1;
  SymMatrix t(n);
  std::vector<Real> scale(n);
  Real wpow(1L);
  for (std::size_t q = 0; q < n; ++q) {
    scale[q] = wpow * sqrt(factorial(q));
    wpow *= pi.w;
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) t(p, q) = scale[p] * scale[q] * pi.pi(p, q);
  return t;
}

Real pi_tilde_trace(const PiMatrix& pi) {
  // tr Pi~ = sum_q w^{2q} <k^{2q}> / q!, ascending q
  Real s;
  const Real w2 = pi.w * pi.w;
  Real wpow(1L);
  for (std::size_t q = 0; q <= pi.q_max; ++q) {
    s += wpow * pi.moments[q] / factorial(q);
    wpow *= w2;
  }
  return s;
}

Real pi_tilde_trace_closed_form(const Real& w, const Real& beta) {
  const Real x = Real(2L) * w * w * beta * beta;
  if (!(x < Real(1L))) throw InvalidConfig("closed form needs w*beta < 1/sqrt(2)");
  return Real(1L) / sqrt(Real(1L) - x);
}

TraceCheck pi_trace_check(const PiMatrix& pi) {
  TraceCheck c;
  c.value = pi_tilde_trace(pi);
  // bandlimited/custom traces converge for any w; gaussian needs w beta < 1/sqrt(2)
  if (pi.kind == OtfKind::gaussian)
    c.converged = Real(2L) * pi.w * pi.w * pi.beta * pi.beta < Real(1L);
  else
    c.converged = true;
  return c;
}

TraceCheck pi_trace_check(const PiMatrix& pi, const Real& object_delta) {
  TraceCheck c = pi_trace_check(pi);
  c.has_window = true;
  const Real sqrt2 = sqrt(Real(2L));
  c.window_lo = sqrt2 * object_delta;
  c.window_hi = Real(1L) / (sqrt2 * pi.beta);
  // beta*delta < 1/2 exactly, not via the rounded endpoints
  c.feasible = Real(2L) * pi.beta * object_delta < Real(1L);
  return c;
}

Real default_w(const ObjectModel& obj, const OtfModel& otf) {
  if (obj.kind == ObjectKind::gaussian && otf.kind == OtfKind::gaussian) {
    const Real lo = sqrt(Real(2L)) * obj.delta;
    const Real hi = Real(1L) / (sqrt(Real(2L)) * otf.beta);
    if (!(lo < hi))
      throw InvalidConfig("gaussian/gaussian needs beta*delta < 1/2 for an admissible w");
    return sqrt(lo * hi);
  }
  return Real(1L);
}

}  // namespace qbound
