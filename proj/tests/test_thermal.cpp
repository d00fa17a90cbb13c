#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "qbound/errors.hpp"
#include "qbound/linalg.hpp"
#include "qbound/real.hpp"
#include "qbound/thermal.hpp"

using namespace qbound;

namespace {

ThermalModel single_mode(const Real& theta) {
  ThermalModel m;
  m.gamma = SymMatrix(1);
  m.gamma(0, 0) = theta;
  SymMatrix d(1);
  d(0, 0) = Real(1L);
  m.dgamma.push_back(d);
  return m;
}

}  // namespace

TEST_CASE("single-mode exact qfi is 1/(theta(1+theta))") {
  for (const Real& theta : {Real("0.1"), Real(1L), Real(7L)}) {
    const SymMatrix k = thermal_qfi(single_mode(theta));
    const Real expected = Real(1L) / (theta * (Real(1L) + theta));
    CHECK(abs(k(0, 0) - expected) < pow2(-240) * expected);
  }
}

TEST_CASE("single-mode sld relaxation gives 1/theta^2") {
  for (const Real& theta : {Real("0.2"), Real(2L)}) {
    const SymMatrix k = sld_qfi(single_mode(theta));
    CHECK(abs(k(0, 0) - Real(1L) / (theta * theta)) < pow2(-238) / (theta * theta));
  }
}

TEST_CASE("single-mode infrared limit is 1/theta^2") {
  const Real theta(5L);
  const SymMatrix j = infrared_fisher(single_mode(theta));
  CHECK(abs(j(0, 0) - Real(1L) / (theta * theta)) < pow2(-240));
}

TEST_CASE("epsilon scaling preserves the shape") {
  const ThermalModel m = make_random_model(3, 4, 2);
  const ThermalModel scaled = m.with_epsilon(Real("0.25"));
  CHECK(abs(scaled.epsilon() - Real("0.25")) < pow2(-240));
  // normalized shapes coincide
  const ThermalModel na = m.normalized();
  const ThermalModel nb = scaled.normalized();
  CHECK(max_abs_diff(na.gamma, nb.gamma) < pow2(-240));
}

TEST_CASE("sandwich: eps K(Gamma) - K(rho) is positive semidefinite") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const ThermalModel m = make_random_model(seed, 4, 2);
    const Real eps = m.epsilon();
    const SymMatrix exact = thermal_qfi(m);
    const SymMatrix sld = sld_qfi(m);
    SymMatrix scaled(sld.size());
    for (std::size_t i = 0; i < sld.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) scaled(i, j) = eps * sld(i, j);
    CHECK(psd_difference(scaled, exact, Real(-1e-12)));
  }
}

TEST_CASE("kappa curve is nonincreasing in the psd order") {
  const std::vector<Real> grid = {Real("0.001"), Real("0.01"), Real("0.1"), Real(1L),
                                  Real(10L),     Real(100L),   Real(1000L)};
  for (std::uint64_t seed = 20; seed <= 26; ++seed) {
    const ThermalModel m = make_random_model(seed, 3, 2);
    const std::vector<SymMatrix> kappa = kappa_curve(m, grid);
    for (std::size_t g = 0; g + 1 < kappa.size(); ++g)
      CHECK(psd_difference(kappa[g], kappa[g + 1], Real(-1e-12)));
  }
}

TEST_CASE("kappa grid must be ascending and positive") {
  const ThermalModel m = make_random_model(1, 2, 1);
  CHECK_THROWS_AS(kappa_curve(m, {Real(1L), Real("0.5")}), InvalidConfig);
  CHECK_THROWS_AS(kappa_curve(m, {Real(0L), Real(1L)}), InvalidConfig);
}

TEST_CASE("weak-source limit: K(rho)/eps approaches K(Gamma)") {
  for (std::uint64_t seed = 40; seed <= 44; ++seed) {
    const ThermalModel m = make_random_model(seed, 4, 2).with_epsilon(Real("0.001"));
    const SymMatrix exact = thermal_qfi(m);
    const SymMatrix sld = sld_qfi(m);
    for (std::size_t i = 0; i < sld.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        CHECK(abs(exact(i, j) / Real("0.001") - sld(i, j)) < Real("0.01") * abs(sld(i, i)));
  }
}

TEST_CASE("strong-source limit: K(rho) approaches J(Phi)") {
  for (std::uint64_t seed = 50; seed <= 54; ++seed) {
    const ThermalModel m = make_random_model(seed, 4, 2).with_epsilon(Real(1000L));
    const SymMatrix exact = thermal_qfi(m);
    const SymMatrix jphi = infrared_fisher(m);
    for (std::size_t i = 0; i < jphi.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        CHECK(abs(exact(i, j) - jphi(i, j)) < Real("0.01") * abs(jphi(i, i)));
  }
}

TEST_CASE("random models are seed-deterministic") {
  const ThermalModel a = make_random_model(99, 4, 3);
  const ThermalModel b = make_random_model(99, 4, 3);
  CHECK(max_abs_diff(a.gamma, b.gamma).is_zero());
  for (std::size_t p = 0; p < 3; ++p)
    CHECK(max_abs_diff(a.dgamma[p], b.dgamma[p]).is_zero());
  const ThermalModel c = make_random_model(100, 4, 3);
  CHECK(max_abs_diff(a.gamma, c.gamma) > Real(0L));
}

TEST_CASE("dimension mismatch in psd_difference is rejected") {
  CHECK_THROWS_AS(psd_difference(SymMatrix(2), SymMatrix(3), Real(0L)), DimensionMismatch);
}
