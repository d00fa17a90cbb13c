#ifndef QBOUND_QUADRATURE_HPP
#define QBOUND_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "qbound/real.hpp"

namespace qbound {

struct QuadRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/// Gauss-Legendre rule on [-1,1], nodes ascending.  Cached per (order, precision).
const QuadRule& gauss_legendre(std::size_t order);

/// Gauss-Hermite rule for the weight exp(-x^2), nodes ascending.
const QuadRule& gauss_hermite(std::size_t order);

struct QuadResult {
  Real value;
  Real error_estimate;  // |change on last order doubling|
  std::size_t order;    // final order used
};

/// Integrate f over [a,b] with Gauss-Legendre, doubling the order from
/// `order` until the change drops below 10^-(precision_bits/8).
QuadResult integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                     std::size_t order = 200);

/// Integrate f(x) exp(-x^2) over the real line with Gauss-Hermite,
/// with the same order-doubling policy.
QuadResult integrate_hermite(const std::function<Real(const Real&)>& f, std::size_t order = 200);

/// Single fixed-order evaluations (no doubling).
Real integrate_fixed(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                     std::size_t order);
Real integrate_hermite_fixed(const std::function<Real(const Real&)>& f, std::size_t order);

}  // namespace qbound

#endif  // QBOUND_QUADRATURE_HPP
