#include "qbound/thermal.hpp"

#include "qbound/errors.hpp"

namespace qbound {

namespace {

// e_j^T M e_l for all (j,l) at once: E^T M E.
Matrix rotate_to_eigenbasis(const EigenSystem& es, const SymMatrix& m) {
  return transpose(es.vectors) * to_dense(m) * es.vectors;
}

}  // namespace

Real ThermalModel::epsilon() const {
  Real t;
  for (std::size_t i = 0; i < gamma.size(); ++i) t += gamma(i, i);
  return t;
}

ThermalModel ThermalModel::normalized() const {
  const Real eps = epsilon();
  if (!(eps > Real(0L))) throw NotPositiveDefinite(0);
  ThermalModel out = *this;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) out.gamma(i, j) /= eps;
  for (SymMatrix& d : out.dgamma)
    for (std::size_t i = 0; i < gamma.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) d(i, j) /= eps;
  return out;
}

ThermalModel ThermalModel::with_epsilon(const Real& eps) const {
  ThermalModel out = normalized();
  for (std::size_t i = 0; i < gamma.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) out.gamma(i, j) *= eps;
  for (SymMatrix& d : out.dgamma)
    for (std::size_t i = 0; i < gamma.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) d(i, j) *= eps;
  return out;
}

SymMatrix thermal_qfi(const ThermalModel& model) {
  const std::size_t n = model.modes();
  const std::size_t p = model.params();
  const EigenSystem es = sym_eigen(model.gamma);
  std::vector<Matrix> rotated;
  rotated.reserve(p);
  for (const SymMatrix& d : model.dgamma) rotated.push_back(rotate_to_eigenbasis(es, d));
  SymMatrix k(p);
  for (std::size_t mu = 0; mu < p; ++mu)
    for (std::size_t nu = 0; nu <= mu; ++nu) {
      Real s;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          const Real num = rotated[mu](j, l) * rotated[nu](l, j);
          if (num.is_zero()) continue;
          const Real den = es.values[j] + es.values[l] +
                           Real(2L) * es.values[j] * es.values[l];
          if (den.is_zero()) throw SingularPair(j, l);
          s += Real(2L) * num / den;
        }
      k(mu, nu) = s;
    }
  return k;
}

SymMatrix sld_qfi(const ThermalModel& model) {
  const std::size_t p = model.params();
  const EigenSystem es = sym_eigen(model.gamma);
  const Real eps = model.epsilon();
  std::vector<SymMatrix> sld;
  sld.reserve(p);
  for (const SymMatrix& d : model.dgamma) sld.push_back(lyap_solve(es, d));
  SymMatrix k(p);
  for (std::size_t mu = 0; mu < p; ++mu)
    for (std::size_t nu = 0; nu <= mu; ++nu) {
      Real tr;
      const Matrix prod = to_dense(model.dgamma[mu]) * to_dense(sld[nu]);
      for (std::size_t i = 0; i < model.modes(); ++i) tr += prod(i, i);
      k(mu, nu) = tr / eps;
    }
  return k;
}

std::vector<SymMatrix> kappa_curve(const ThermalModel& model, const std::vector<Real>& eps_grid) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > Real(0L))) throw InvalidConfig("eps grid must be positive");
    if (i > 0 && !(eps_grid[i - 1] < eps_grid[i]))
      throw InvalidConfig("eps grid must be ascending");
  }
  std::vector<SymMatrix> out;
  out.reserve(eps_grid.size());
  for (const Real& eps : eps_grid) {
    const ThermalModel scaled = model.with_epsilon(eps);
    SymMatrix k = thermal_qfi(scaled);
    for (std::size_t i = 0; i < k.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) k(i, j) /= eps;
    out.push_back(std::move(k));
  }
  return out;
}

SymMatrix infrared_fisher(const ThermalModel& model) {
  const std::size_t n = model.modes();
  const std::size_t p = model.params();
  const EigenSystem es = sym_eigen(model.gamma);
  for (std::size_t j = 0; j < n; ++j)
    if (es.values[j] <= Real(0L)) throw NotPositiveDefinite(j);
  std::vector<Matrix> rotated;
  rotated.reserve(p);
  for (const SymMatrix& d : model.dgamma) rotated.push_back(rotate_to_eigenbasis(es, d));
  SymMatrix jphi(p);
  for (std::size_t mu = 0; mu < p; ++mu)
    for (std::size_t nu = 0; nu <= mu; ++nu) {
      Real s;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          s += rotated[mu](j, l) * rotated[nu](l, j) / (es.values[j] * es.values[l]);
      jphi(mu, nu) = s;
    }
  return jphi;
}

ThermalModel make_random_model(std::uint64_t seed, std::size_t n, std::size_t nparams) {
  // xorshift-based generator; avoids stdlib distributions so the stream
  // is identical across platforms
  std::uint64_t state = seed ^ 0x9e3779b97f4a7c15ULL;
  auto next_u64 = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  auto uniform = [&]() {
    // in [-1, 1)
    return Real(static_cast<double>(next_u64() >> 11) * 0x1p-52) - Real(1L);
  };
  ThermalModel model;
  model.gamma = SymMatrix(n);
  // Gamma = I + c S with |S_ij| <= 1 keeps the spectrum within
  // [1 - cn, 1 + cn]: SPD and well-conditioned for any seed
  const Real c(0.05);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      model.gamma(i, j) = c * uniform();
      if (i == j) model.gamma(i, j) += Real(1L);
    }
  for (std::size_t mu = 0; mu < nparams; ++mu) {
    SymMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) d(i, j) = uniform();
    model.dgamma.push_back(std::move(d));
  }
  return model;
}

bool psd_difference(const SymMatrix& a, const SymMatrix& b, const Real& floor) {
  if (a.size() != b.size()) throw DimensionMismatch("psd_difference");
  SymMatrix diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) diff(i, j) = a(i, j) - b(i, j);
  return smallest_eigenvalue(diff) >= floor;
}

}  // namespace qbound
