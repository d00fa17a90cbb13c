#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbound/errors.hpp"
#include "qbound/linalg.hpp"
#include "qbound/moments.hpp"
#include "qbound/otf.hpp"
#include "qbound/quadrature.hpp"
#include "qbound/real.hpp"

using namespace qbound;

TEST_CASE("gaussian otf moments are (2q-1)!! beta^2q") {
  const Real beta("0.8");
  const std::vector<Real> m = otf_moments(OtfModel::gaussian(beta), 4);
  CHECK(m[0] == Real(1L));
  CHECK(abs(m[1] - beta * beta) < pow2(-240));
  CHECK(abs(m[2] - Real(3L) * pow(beta, 4L)) < pow2(-240));
  CHECK(abs(m[3] - Real(15L) * pow(beta, 6L)) < pow2(-240));
  CHECK(abs(m[4] - Real(105L) * pow(beta, 8L)) < pow2(-240));
}

TEST_CASE("bandlimited otf moments are beta^2q/(2q+1)") {
  const Real beta("1.3");
  const std::vector<Real> m = otf_moments(OtfModel::bandlimited(beta), 3);
  CHECK(abs(m[1] - pow(beta, 2L) / Real(3L)) < pow2(-235));
  CHECK(abs(m[2] - pow(beta, 4L) / Real(5L)) < pow2(-235));
  CHECK(abs(m[3] - pow(beta, 6L) / Real(7L)) < pow2(-235));
}

TEST_CASE("pi matrix entries match direct quadrature of the otf density") {
  // oracle: (-1)^{(p-q)/2} Int |Psi|^2 k^{p+q} dk / (p! q!) by quadrature
  const Real tol("1e-25");
  SUBCASE("gaussian") {
    const Real beta("0.9");
    const PiMatrix pi = pi_matrix(OtfModel::gaussian(beta), 6, Real(1L));
    const Real scale = sqrt(Real(2L)) * beta;
    for (std::size_t p = 0; p <= 6; ++p)
      for (std::size_t q = 0; q <= p; ++q) {
        if ((p + q) % 2 != 0) {
          CHECK(pi.pi(p, q).is_zero());
          continue;
        }
        const QuadResult m = integrate_hermite([&](const Real& x) {
          return pow(scale * x, static_cast<long>(p + q)) / sqrt(const_pi());
        });
        Real expected = m.value / (factorial(p) * factorial(q));
        if ((p - q) % 4 == 2) expected = -expected;
        CHECK(abs(pi.pi(p, q) - expected) < tol);
      }
  }
  SUBCASE("bandlimited") {
    const Real beta("1.1");
    const PiMatrix pi = pi_matrix(OtfModel::bandlimited(beta), 5, Real(1L));
    for (std::size_t p = 0; p <= 5; ++p)
      for (std::size_t q = 0; q <= p; ++q) {
        if ((p + q) % 2 != 0) continue;
        const QuadResult m = integrate(
            [&](const Real& k) { return pow(k, static_cast<long>(p + q)) / (Real(2L) * beta); },
            -beta, beta);
        Real expected = m.value / (factorial(p) * factorial(q));
        if ((p - q) % 4 == 2) expected = -expected;
        CHECK(abs(pi.pi(p, q) - expected) < tol);
      }
  }
}

TEST_CASE("truncated pi matrix is positive semidefinite") {
  for (const OtfModel& otf : {OtfModel::gaussian(Real(1L)), OtfModel::bandlimited(Real(1L))}) {
    const PiMatrix pi = pi_matrix(otf, 6, Real(1L));
    CHECK(smallest_eigenvalue(pi.pi) > -pow2(-200));
  }
}

TEST_CASE("scaled trace matches the gaussian closed form") {
  const Real beta(1L);
  const Real w("0.4");  // w beta < 1/sqrt(2); term ratio 2w^2 = 0.32
  const Real closed = pi_tilde_trace_closed_form(w, beta);
  CHECK(abs(closed - Real(1L) / sqrt(Real("0.68"))) < pow2(-240));
  const PiMatrix pi = pi_matrix(OtfModel::gaussian(beta), 60, w);
  CHECK(abs(pi_tilde_trace(pi) - closed) < Real("1e-20"));
}

TEST_CASE("closed-form trace rejects a divergent scaling constant") {
  CHECK_THROWS_AS(pi_tilde_trace_closed_form(Real(1L), Real(1L)), InvalidConfig);
}

TEST_CASE("scaled matrix diagonal reproduces the trace terms") {
  const Real w("0.4");
  const PiMatrix pi = pi_matrix(OtfModel::gaussian(Real(1L)), 8, w);
  const SymMatrix pt = pi_tilde(pi);
  Real diag_sum;
  for (std::size_t q = 0; q <= 8; ++q) diag_sum += pt(q, q);
  CHECK(abs(diag_sum - pi_tilde_trace(pi)) < pow2(-220));
}

TEST_CASE("feasibility window is (sqrt(2) delta, 1/(sqrt(2) beta))") {
  const Real beta(1L);
  const Real delta("0.01");
  const PiMatrix pi = pi_matrix(OtfModel::gaussian(beta), 10, Real("0.1"));
  const TraceCheck tc = pi_trace_check(pi, delta);
  CHECK(tc.has_window);
  CHECK(tc.window_lo == sqrt(Real(2L)) * delta);
  CHECK(tc.window_hi == Real(1L) / (sqrt(Real(2L)) * beta));
  CHECK(tc.feasible);
  CHECK(tc.converged);
  // window empty iff beta delta >= 1/2
  const TraceCheck tight = pi_trace_check(pi, Real("0.5"));
  CHECK(!tight.feasible);
  const TraceCheck edge = pi_trace_check(pi, Real("0.49"));
  CHECK(edge.feasible);
}

TEST_CASE("default scaling constant is the window geometric mean") {
  const ObjectModel obj = ObjectModel::gaussian(Real("0.01"));
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  const Real w = default_w(obj, otf);
  // sqrt(sqrt(2)*0.01 * 1/sqrt(2)) = 0.1
  CHECK(abs(w - Real("0.1")) < pow2(-240));
  CHECK(default_w(ObjectModel::uniform(Real("0.01")), OtfModel::bandlimited(Real(1L))) ==
        Real(1L));
  CHECK_THROWS_AS(default_w(ObjectModel::gaussian(Real("0.6")), otf), InvalidConfig);
}

TEST_CASE("custom otf csv is renormalized and gets beta from its variance") {
  const std::string path = "/tmp/qbound_test_otf.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fprintf(f, "k,psi2\n");
    // unnormalized tent profile on [-1, 1]
    for (int i = 0; i <= 80; ++i) {
      const double k = -1.0 + 0.025 * i;
      std::fprintf(f, "%.17g,%.17g\n", k, 2.0 * (1.0 - (k < 0 ? -k : k)));
    }
    std::fclose(f);
  }
  const OtfModel otf = OtfModel::custom_from_csv(path);
  CHECK(otf.kind == OtfKind::custom);
  const std::vector<Real> m = otf_moments(otf, 2);
  CHECK(abs(m[0] - Real(1L)) < Real(1e-25));
  // tent density variance is 1/6
  CHECK(abs(m[1] - Real(1L) / Real(6L)) < Real(1e-3));
  CHECK(abs(otf.beta - sqrt(m[1])) < Real(1e-25));
}
