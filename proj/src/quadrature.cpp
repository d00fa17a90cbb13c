#include "qbound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

std::mutex g_cache_mutex;
std::map<std::pair<std::size_t, std::size_t>, QuadRule> g_legendre_cache;
std::map<std::pair<std::size_t, std::size_t>, QuadRule> g_hermite_cache;

// Legendre P_n(x) and P_{n-1}(x) by upward recurrence.
void legendre_pair(std::size_t n, const Real& x, Real& pn, Real& pnm1) {
  Real p0(1L), p1 = x;
  if (n == 0) { pn = p0; pnm1 = Real(0L); return; }
  for (std::size_t k = 1; k < n; ++k) {
    // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
    Real p2 = (Real(2 * k + 1) * x * p1 - Real(k) * p0) / Real(k + 1);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  pn = p1;
  pnm1 = p0;
}

QuadRule build_legendre(std::size_t n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real pi = const_pi();
  const Real one(1L);
  const Real tol = pow2(-static_cast<long>(precision_bits()) + 8);
  for (std::size_t i = 0; i < n; ++i) {
    Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real pn, pnm1, dp;
    for (int iter = 0; iter < 200; ++iter) {
      legendre_pair(n, x, pn, pnm1);
      dp = Real(n) * (x * pn - pnm1) / (x * x - one);
      const Real dx = pn / dp;
      x -= dx;
      if (abs(dx) <= tol * max(one, abs(x))) break;
    }
    legendre_pair(n, x, pn, pnm1);
    dp = Real(n) * (x * pn - pnm1) / (x * x - one);
    rule.nodes[i] = x;
    rule.weights[i] = Real(2L) / ((one - x * x) * dp * dp);
  }
  // initial guesses come out descending
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

// Physicists' Hermite H_n(x), H_{n-1}(x) by upward recurrence (extended
// precision absorbs the growth).
void hermite_pair(std::size_t n, const Real& x, Real& hn, Real& hnm1) {
  Real h0(1L), h1 = Real(2L) * x;
  if (n == 0) { hn = h0; hnm1 = Real(0L); return; }
  for (std::size_t k = 1; k < n; ++k) {
    Real h2 = Real(2L) * x * h1 - Real(2 * k) * h0;
    h0 = std::move(h1);
    h1 = std::move(h2);
  }
  hn = h1;
  hnm1 = h0;
}

// Sign of the weighted Hermite function at x, evaluated in double with
// periodic rescaling so the e^{-x^2/2} prefactor cannot underflow.
int hermite_sign_double(std::size_t n, double x) {
  double p0 = 1.0, p1 = 2.0 * x;
  double scale_guard = 1e-280;
  if (n == 0) return p0 > 0 ? 1 : -1;
  for (std::size_t k = 1; k < n; ++k) {
    double p2 = 2.0 * x * p1 - 2.0 * static_cast<double>(k) * p0;
    p0 = p1;
    p1 = p2;
    const double m = std::max(std::abs(p0), std::abs(p1));
    if (m > 1e280) { p0 *= scale_guard; p1 *= scale_guard; }
  }
  if (p1 == 0.0) return 0;
  return p1 > 0 ? 1 : -1;
}

std::vector<double> hermite_roots_double(std::size_t n) {
  // positive roots of H_n located by sign-change scan + bisection
  const double xmax = std::sqrt(2.0 * static_cast<double>(n) + 1.0);
  std::vector<double> roots;
  const std::size_t wanted = n / 2;
  double step = M_PI / std::sqrt(2.0 * static_cast<double>(n) + 1.0) / 8.0;
  for (int attempt = 0; attempt < 6 && roots.size() != wanted; ++attempt, step /= 2.0) {
    roots.clear();
    double a = (n % 2 == 1) ? step / 2.0 : 1e-12;
    int sa = hermite_sign_double(n, a);
    for (double b = a + step; a < xmax + 1.0; a = b, b += step) {
      int sb = hermite_sign_double(n, b);
      if (sa != 0 && sb != 0 && sa != sb) {
        double lo = a, hi = b;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const int sm = hermite_sign_double(n, mid);
          if (sm == sa) lo = mid; else hi = mid;
        }
        roots.push_back(0.5 * (lo + hi));
      }
      sa = sb;
    }
  }
  if (roots.size() != wanted) throw NoConvergence(roots.size());
  return roots;
}

QuadRule build_hermite(std::size_t n) {
  const std::vector<double> guesses = hermite_roots_double(n);
  const Real tol = pow2(-static_cast<long>(precision_bits()) + 8);
  const Real one(1L);
  std::vector<Real> pos;
  pos.reserve(guesses.size());
  for (double g : guesses) {
    Real x(g);
    Real hn, hnm1;
    for (int iter = 0; iter < 200; ++iter) {
      hermite_pair(n, x, hn, hnm1);
      // H_n' = 2n H_{n-1}
      const Real dx = hn / (Real(2 * n) * hnm1);
      x -= dx;
      if (abs(dx) <= tol * max(one, abs(x))) break;
    }
    pos.push_back(x);
  }
  std::sort(pos.begin(), pos.end());
  QuadRule rule;
  const Real wpref = pow2(static_cast<long>(n) - 1) * factorial(n) * sqrt(const_pi()) /
                     (Real(n) * Real(n));
  auto weight_at = [&](const Real& x) {
    Real hn, hnm1;
    hermite_pair(n, x, hn, hnm1);
    return wpref / (hnm1 * hnm1);
  };
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight_at(-*it));
  }
  if (n % 2 == 1) {
    rule.nodes.push_back(Real(0L));
    rule.weights.push_back(weight_at(Real(0L)));
  }
  for (const Real& x : pos) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight_at(x));
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(std::size_t order) {
  if (order < 2) throw QuadratureFailure("order must be >= 2");
  const auto key = std::make_pair(order, precision_bits());
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_legendre_cache.find(key);
  if (it == g_legendre_cache.end())
    it = g_legendre_cache.emplace(key, build_legendre(order)).first;
  return it->second;
}

const QuadRule& gauss_hermite(std::size_t order) {
  if (order < 2) throw QuadratureFailure("order must be >= 2");
  const auto key = std::make_pair(order, precision_bits());
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_hermite_cache.find(key);
  if (it == g_hermite_cache.end())
    it = g_hermite_cache.emplace(key, build_hermite(order)).first;
  return it->second;
}

Real integrate_fixed(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                     std::size_t order) {
  const QuadRule& rule = gauss_legendre(order);
  const Real mid = (a + b) / Real(2L);
  const Real half = (b - a) / Real(2L);
  Real s;
  for (std::size_t i = 0; i < order; ++i) {
    const Real fx = f(mid + half * rule.nodes[i]);
    if (!fx.is_finite()) throw NonFiniteSample();
    fma_add(s, rule.weights[i], fx);
  }
  return s * half;
}

Real integrate_hermite_fixed(const std::function<Real(const Real&)>& f, std::size_t order) {
  const QuadRule& rule = gauss_hermite(order);
  Real s;
  for (std::size_t i = 0; i < order; ++i) {
    const Real fx = f(rule.nodes[i]);
    if (!fx.is_finite()) throw NonFiniteSample();
    fma_add(s, rule.weights[i], fx);
  }
  return s;
}

namespace {

constexpr std::size_t kMaxOrder = 6400;

QuadResult integrate_doubling(const std::function<Real(std::size_t)>& eval, std::size_t order) {
  const Real tol = pow(Real(10L), -static_cast<long>(precision_bits() / 8));
  QuadResult res;
  res.order = order;
  res.value = eval(order);
  res.error_estimate = abs(res.value);
  while (res.order < kMaxOrder) {
    const std::size_t next = res.order * 2;
    const Real v = eval(next);
    res.error_estimate = abs(v - res.value);
    res.value = v;
    res.order = next;
    if (res.error_estimate < tol * max(Real(1L), abs(v))) break;
  }
  return res;
}

}  // namespace

QuadResult integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                     std::size_t order) {
  return integrate_doubling([&](std::size_t n) { return integrate_fixed(f, a, b, n); }, order);
}

QuadResult integrate_hermite(const std::function<Real(const Real&)>& f, std::size_t order) {
  return integrate_doubling([&](std::size_t n) { return integrate_hermite_fixed(f, n); }, order);
}

}  // namespace qbound
