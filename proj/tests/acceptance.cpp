// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  argv[1] is the path to the CLI binary (used by the determinism
// criterion).
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qbound/bounds.hpp"
#include "qbound/cholesky_deriv.hpp"
#include "qbound/errors.hpp"
#include "qbound/linalg.hpp"
#include "qbound/moments.hpp"
#include "qbound/otf.hpp"
#include "qbound/real.hpp"
#include "qbound/thermal.hpp"

using namespace qbound;

namespace {

bool g_all_ok = true;

void report(int n, const std::string& name, bool ok) {
  std::printf("criterion %2d %-58s %s\n", n, name.c_str(), ok ? "PASS" : "FAIL");
  if (!ok) g_all_ok = false;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::vector<Real> kDeltas = {Real("0.04"), Real("0.02"), Real("0.01")};

Real diag_value(const ObjectModel& obj, const OtfModel& otf, std::size_t mu, std::size_t q_max) {
  return k_tilde_diag(obj, otf, mu, q_max, Real(1e-8)).value;
}

// --- criterion 1 ---------------------------------------------------------
void scaling_law() {
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  bool ok = true;
  for (int kind = 0; kind < 2; ++kind) {
    for (std::size_t mu = 1; mu <= 6; ++mu) {
      std::vector<double> lx, ly;
      for (const Real& d : kDeltas) {
        const ObjectModel obj = kind == 0 ? ObjectModel::gaussian(d) : ObjectModel::uniform(d);
        lx.push_back(std::log(d.to_double()));
        ly.push_back(std::log(diag_value(obj, otf, mu, 24).to_double()));
      }
      const double target = -2.0 * static_cast<double>(mu / 2);
      if (std::abs(fit_slope(lx, ly) - target) > 0.15) ok = false;
    }
  }
  report(1, "power-law scaling of the diagonal bound, mu = 1..6", ok);
}

// --- criterion 2 ---------------------------------------------------------
void leading_values() {
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  const Real delta("0.01");
  const ObjectModel obj = ObjectModel::gaussian(delta);
  const Real k11 = diag_value(obj, otf, 1, 24);
  const Real k22 = diag_value(obj, otf, 2, 24);
  const bool ok = abs(k11 / Real(4L) - Real(1L)) < Real("0.01") &&
                  abs(k22 * delta * delta - Real(1L)) < Real("0.02");
  report(2, "small-width closed forms for the first two moments", ok);
}

// --- criterion 3 ---------------------------------------------------------
void identity_residuals() {
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  bool ok = true;
  for (const Real& delta : {Real("0.2"), Real("0.05")})
    for (std::size_t mu : {1, 2}) {
      const BoundResult res = k_tilde_diag(ObjectModel::gaussian(delta), otf, mu, 30, Real(1e-8));
      if (!(res.norm_residual < Real("1e-10") && res.b_mu_residual < Real("1e-10"))) ok = false;
    }
  report(3, "normalization and first-order trace identities", ok);
}

// --- criterion 4 ---------------------------------------------------------
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ^ 0xa5a5a5a55a5a5a5aULL) {}
  std::uint64_t u64() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  Real unit() { return Real(static_cast<double>(u64() >> 11) * 0x1p-52); }
};

ObjectModel random_object(Rng& rng) {
  const Real delta = Real("0.3") + rng.unit();
  switch (rng.u64() % 4) {
    case 0:
      return ObjectModel::gaussian(delta);
    case 1:
      return ObjectModel::gaussian(delta, (rng.unit() - Real("0.5")) / Real(2L));
    case 2:
      return ObjectModel::uniform(delta, (rng.unit() - Real("0.5")) / Real(2L));
    default: {
      std::vector<Real> x(12), w(12);
      for (std::size_t i = 0; i < 12; ++i) {
        x[i] = Real(i) / Real(6L) - Real(1L) + rng.unit() / Real(16L);
        w[i] = rng.unit() + Real("0.1");
      }
      return ObjectModel::points(delta, x, w);
    }
  }
}

LowerTriangular fd_derivative(const MomentVector& mv, std::size_t q_max, std::size_t mu,
                              const Real& h) {
  auto build = [&](const Real& bump) {
    SymMatrix theta(q_max + 1);
    for (std::size_t q = 0; q <= q_max; ++q)
      for (std::size_t p = 0; p <= q; ++p) {
        theta(q, p) = mv.theta[q + p];
        if (q + p == mu) theta(q, p) += bump;
      }
    return chol(theta);
  };
  const LowerTriangular plus = build(h);
  const LowerTriangular minus = build(-h);
  LowerTriangular d(q_max + 1);
  for (std::size_t q = 0; q <= q_max; ++q)
    for (std::size_t r = 0; r <= q; ++r)
      d.at(q, r) = (plus.at(q, r) - minus.at(q, r)) / (Real(2L) * h);
  return d;
}

void derivative_cross_validation() {
  Rng rng(31337);
  const Real cross_tol = pow2(-(static_cast<long>(precision_bits()) - 16));
  const Real fd_tol("1e-12");
  bool ok = true;
  for (std::size_t cases = 0; cases < 120; ++cases) {
    const ObjectModel obj = random_object(rng);
    const std::size_t q_max = 4 + rng.u64() % 2;
    const std::size_t mu = 1 + rng.u64() % 8;
    const MomentVector mv = moment_sequence(obj, 2 * q_max);
    const CholeskyPair pair = cholesky_factor(hankel(mv, q_max));
    const CholeskyDerivative rec = derivative_recursive(pair, mu);
    const CholeskyDerivative sar = derivative_sarkka(pair, mu);
    Real scale(1L);
    for (std::size_t q = 0; q <= q_max; ++q)
      for (std::size_t r = 0; r <= q; ++r) scale = max(scale, abs(rec.dlambda.at(q, r)));
    if (!(max_abs_diff(rec.dlambda, sar.dlambda) < cross_tol * scale)) ok = false;
    const Real h = pow2(-static_cast<long>(precision_bits()) / 3) *
                   max(abs(mv.theta[mu]), pow(obj.delta, static_cast<long>(mu)));
    const LowerTriangular fd = fd_derivative(mv, q_max, mu, h);
    if (!(max_abs_diff(rec.dlambda, fd) < fd_tol * scale)) ok = false;
    if (!(max_abs_diff(sar.dlambda, fd) < fd_tol * scale)) ok = false;
  }
  report(4, "derivative formulas vs each other and finite differences", ok);
}

// --- criterion 5 ---------------------------------------------------------
void structure_lemmas() {
  bool ok = true;
  // exact zero block
  const MomentVector mv = moment_sequence(ObjectModel::gaussian(Real("0.4"), Real("0.2")), 16);
  const CholeskyPair pair = cholesky_factor(hankel(mv, 8));
  for (std::size_t mu = 1; mu <= 8; ++mu) {
    for (const CholeskyDerivative& d :
         {derivative_recursive(pair, mu), derivative_sarkka(pair, mu)})
      for (std::size_t q = 0; q < (mu + 1) / 2; ++q)
        for (std::size_t r = 0; r <= q; ++r)
          if (!d.dlambda.at(q, r).is_zero()) ok = false;
  }
  // fitted width exponents
  const std::vector<Real> deltas = {Real("0.04"), Real("0.02"), Real("0.01"), Real("0.005")};
  for (std::size_t mu = 1; mu <= 6; ++mu) {
    const StructureReport rep = structure_orders(ObjectModel::gaussian(Real(1L)), mu, 5, deltas);
    bool saw_leading = false;
    for (const EntrySlope& e : rep.lambda_slopes)
      if (std::abs(e.slope - e.predicted) > 0.1) ok = false;
    for (const EntrySlope& e : rep.deriv_slopes) {
      if (std::abs(e.slope - e.predicted) > 0.1) ok = false;
      if (e.leading) saw_leading = true;
    }
    if (!saw_leading) ok = false;
  }
  report(5, "zero-block pattern and entrywise width exponents", ok);
}

// --- criterion 6 ---------------------------------------------------------
void convergence_diagnostics() {
  bool ok = true;
  const ObjectModel obj = ObjectModel::gaussian(Real("0.05"));
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  const Real w = default_w(obj, otf);
  const TailReport rep = tail_diagnostics(obj, otf, 2, 40, w);
  if (rep.corrected_ratios.empty() ||
      !(abs(rep.corrected_ratios.back() / rep.limit_ratio - Real(1L)) < Real("0.05")))
    ok = false;
  // feasibility window endpoints and emptiness
  const PiMatrix pi = pi_matrix(otf, 10, w);
  const TraceCheck tc = pi_trace_check(pi, obj.delta);
  if (!(tc.window_lo == sqrt(Real(2L)) * obj.delta &&
        tc.window_hi == Real(1L) / (sqrt(Real(2L)) * otf.beta) && tc.feasible))
    ok = false;
  if (pi_trace_check(pi, Real("0.5")).feasible) ok = false;
  if (!pi_trace_check(pi, Real("0.499")).feasible) ok = false;
  // scaled trace against the closed form
  const PiMatrix big = pi_matrix(otf, 60, Real("0.4"));
  if (!(abs(pi_tilde_trace(big) - pi_tilde_trace_closed_form(Real("0.4"), otf.beta)) <
        Real("1e-20")))
    ok = false;
  report(6, "tail ratio limit, feasibility window, scaled trace", ok);
}

// --- criterion 7 ---------------------------------------------------------
void qsnr_decay() {
  const ObjectModel obj = ObjectModel::uniform(Real("0.1"));
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  bool ok = true;
  Real prev;
  for (std::size_t q = 1; q <= 5; ++q) {
    const BoundResult res = k_tilde_diag(obj, otf, 2 * q, 26, Real(1e-8));
    const SnrResult s = qsnr(obj, otf, 2 * q, Real(1000L), res);
    if (!s.has_prefactor || !(s.chi <= s.chi_prime)) ok = false;
    if (q > 1 && !(s.qsnr < prev)) ok = false;
    prev = s.qsnr;
  }
  report(7, "quantum snr decreasing in the moment order", ok);
}

// --- criterion 8 ---------------------------------------------------------
void constellation_scaling() {
  const std::vector<Real> x = {Real(-1L), Real("-0.25"), Real("0.5"), Real(1L)};
  const std::vector<Real> w = {Real(1L), Real(2L), Real(3L), Real(2L)};
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  bool ok = true;
  for (std::size_t mu = 1; mu <= 4; ++mu) {
    std::vector<double> lx, lc, ls;
    for (const Real& d : kDeltas) {
      const ConstellationBounds c =
          make_constellation_bounds(ObjectModel::points(d, x, w), otf, 4);
      lx.push_back(std::log(d.to_double()));
      lc.push_back(std::log(convexity_bound(c, mu, Real(1L)).to_double()));
      ls.push_back(std::log(classical_sim_bound(c, mu, Real(1L)).to_double()));
    }
    if (std::abs(fit_slope(lx, lc) - (2.0 * mu - 2.0)) > 0.1) ok = false;
    if (std::abs(fit_slope(lx, ls) - 2.0 * mu) > 0.1) ok = false;
  }
  report(8, "constellation bound width exponents", ok);
}

// --- criterion 9 ---------------------------------------------------------
void thermal_suite() {
  bool ok = true;
  const std::vector<Real> grid = {Real("0.001"), Real("0.01"), Real("0.1"), Real(1L),
                                  Real(10L),     Real(100L),   Real(1000L)};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ThermalModel m = make_random_model(seed, 4, 2);
    const Real eps = m.epsilon();
    const SymMatrix exact = thermal_qfi(m);
    const SymMatrix sld = sld_qfi(m);
    SymMatrix scaled(sld.size());
    for (std::size_t i = 0; i < sld.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) scaled(i, j) = eps * sld(i, j);
    if (!psd_difference(scaled, exact, Real(-1e-12))) ok = false;
    const std::vector<SymMatrix> kappa = kappa_curve(m, grid);
    for (std::size_t g = 0; g + 1 < kappa.size(); ++g)
      if (!psd_difference(kappa[g], kappa[g + 1], Real(-1e-12))) ok = false;
    const ThermalModel weak = m.with_epsilon(Real("0.001"));
    const SymMatrix kw = thermal_qfi(weak);
    const SymMatrix kg = sld_qfi(weak);
    for (std::size_t i = 0; i < kg.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!(abs(kw(i, j) / Real("0.001") - kg(i, j)) < Real("0.01") * abs(kg(i, i)))) ok = false;
    const ThermalModel strong = m.with_epsilon(Real(1000L));
    const SymMatrix ks = thermal_qfi(strong);
    const SymMatrix jp = infrared_fisher(strong);
    for (std::size_t i = 0; i < jp.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!(abs(ks(i, j) - jp(i, j)) < Real("0.01") * abs(jp(i, i)))) ok = false;
  }
  report(9, "thermal-state sandwich, monotonicity and limits (50 seeds)", ok);
}

// --- criterion 10 --------------------------------------------------------
void direct_imaging_baseline() {
  const OtfModel otf = OtfModel::gaussian(Real(1L));
  bool ok = true;
  for (std::size_t mu : {2, 3}) {
    std::vector<double> lx, lj;
    Real prev_ratio;
    bool first = true;
    for (const Real& d : kDeltas) {
      const ObjectModel obj = ObjectModel::gaussian(d);
      const Real j = direct_imaging_fisher(obj, otf, mu, Real(1L));
      lx.push_back(std::log(d.to_double()));
      lj.push_back(std::log(j.to_double()));
      const Real ratio = diag_value(obj, otf, mu, 24) / j;
      if (!first && !(ratio > prev_ratio)) ok = false;
      prev_ratio = ratio;
      first = false;
    }
    if (std::abs(fit_slope(lx, lj)) > 0.2) ok = false;
  }
  report(10, "direct-imaging information flat while the bound grows", ok);
}

// --- criterion 11 --------------------------------------------------------
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "qbound_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path cfg = base / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "object.kind = gaussian\nobject.delta = 0.02, 0.01\n"
        << "otf.kind = gaussian\notf.beta = 1\n"
        << "compute.mu = 1, 2\ncompute.q_max = 20\noutput.formats = csv,json\n";
  }
  bool ok = true;
  for (const char* sub : {"a", "b"}) {
    const std::string cmd =
        cli + " bound --config " + cfg.string() + " --out " + (base / sub).string();
    if (std::system(cmd.c_str()) != 0) ok = false;
  }
  for (const char* f : {"bound.csv", "bound.json"}) {
    const std::string a = slurp((base / "a" / f).string());
    const std::string b = slurp((base / "b" / f).string());
    if (a.empty() || a != b) ok = false;
  }
  report(11, "byte-identical repeated runs of the cli", ok);
}

}  // namespace

int main(int argc, char** argv) {
  set_precision_bits(256);
  scaling_law();
  leading_values();
  identity_residuals();
  derivative_cross_validation();
  structure_lemmas();
  convergence_diagnostics();
  qsnr_decay();
  constellation_scaling();
  thermal_suite();
  direct_imaging_baseline();
  if (argc > 1) {
    determinism(argv[1]);
  } else {
    report(11, "byte-identical repeated runs of the cli (no binary given)", false);
  }
  std::printf("%s\n", g_all_ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return g_all_ok ? 0 : 1;
}
