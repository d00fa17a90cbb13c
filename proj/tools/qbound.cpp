#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbound/bounds.hpp"
#include "qbound/cholesky_deriv.hpp"
#include "qbound/config.hpp"
#include "qbound/errors.hpp"
#include "qbound/moments.hpp"
#include "qbound/otf.hpp"
#include "qbound/real.hpp"
#include "qbound/thermal.hpp"

using json = nlohmann::ordered_json;
using namespace qbound;

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir;  // overrides config when nonempty
  std::size_t precision = 0;  // overrides env and config when nonzero
};

// flag > env > config
std::size_t resolve_precision(const CliArgs& args, std::size_t config_bits) {
  std::size_t bits = config_bits;
  if (const char* env = std::getenv("QBOUND_PRECISION_BITS")) bits = std::stoul(env);
  if (args.precision != 0) bits = args.precision;
  if (bits < 64) throw InvalidConfig("precision must be >= 64 bits");
  return bits;
}

// Config values must be parsed at the final working precision, which the
// config itself may set; parse once to learn it, then re-parse.
RunConfig load_config(const CliArgs& args) {
  const RunConfig probe = parse_config(args.config_path);
  set_precision_bits(resolve_precision(args, probe.precision_bits));
  RunConfig cfg = parse_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  std::sort(cfg.deltas.begin(), cfg.deltas.end());
  std::sort(cfg.mus.begin(), cfg.mus.end());
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

Real run_w(const RunConfig& cfg, const ObjectModel& obj, const OtfModel& otf) {
  return cfg.w_auto ? default_w(obj, otf) : cfg.w;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidConfig("cannot write " + path);
  out << text;
}

struct ResultRow {
  Real delta, k_tilde, leading, tail, norm_res, bmu_res, qsnr_v, direct, convexity, classical;
  std::size_t mu = 0;
  bool has_bound = false, has_direct = false, has_constellation = false;
  Verdict verdict = Verdict::converged;
};

json row_json(const ResultRow& r) {
  json j;
  j["delta"] = r.delta.str();
  j["mu"] = r.mu;
  j["k_tilde"] = r.has_bound ? json(r.k_tilde.str()) : json(nullptr);
  j["leading_order"] = r.has_bound ? json(r.leading.str()) : json(nullptr);
  j["tail_estimate"] = r.has_bound ? json(r.tail.str()) : json(nullptr);
  j["norm_residual"] = r.has_bound ? json(r.norm_res.str()) : json(nullptr);
  j["b_mu_residual"] = r.has_bound ? json(r.bmu_res.str()) : json(nullptr);
  j["verdict"] =
      r.has_bound ? json(r.verdict == Verdict::converged ? "converged" : "inconclusive")
                  : json(nullptr);
  j["qsnr"] = r.has_bound ? json(r.qsnr_v.str()) : json(nullptr);
  j["direct_fisher"] = r.has_direct ? json(r.direct.str()) : json(nullptr);
  j["convexity_bound"] = r.has_constellation ? json(r.convexity.str()) : json(nullptr);
  j["classical_sim_bound"] = r.has_constellation ? json(r.classical.str()) : json(nullptr);
  return j;
}

std::string row_csv(const ResultRow& r) {
  auto opt = [](bool has, const Real& v) { return has ? v.str() : std::string(); };
  std::string verdict;
  if (r.has_bound) verdict = r.verdict == Verdict::converged ? "converged" : "inconclusive";
  return r.delta.str() + "," + std::to_string(r.mu) + "," + opt(r.has_bound, r.k_tilde) + "," +
         opt(r.has_bound, r.leading) + "," + opt(r.has_bound, r.tail) + "," +
         opt(r.has_bound, r.norm_res) + "," + opt(r.has_bound, r.bmu_res) + "," + verdict + "," +
         opt(r.has_bound, r.qsnr_v) + "," + opt(r.has_direct, r.direct) + "," +
         opt(r.has_constellation, r.convexity) + "," + opt(r.has_constellation, r.classical);
}

std::vector<ResultRow> compute_rows(const RunConfig& cfg) {
  const OtfModel otf = make_otf(cfg);
  std::vector<ResultRow> rows;
  for (const Real& delta : cfg.deltas) {
    const ObjectModel obj = make_object(cfg, delta);
    const bool infinite = obj.infinite_support();
    CholeskyPair pair;
    PiMatrix pi;
    if (infinite) {
      const MomentVector mv = moment_sequence(obj, 2 * cfg.q_max);
      pair = cholesky_factor(hankel(mv, cfg.q_max));
      pi = pi_matrix(otf, cfg.q_max, run_w(cfg, obj, otf));
    }
    ConstellationBounds cb;
    if (obj.kind == ObjectKind::points) {
      const std::size_t mu_hi = *std::max_element(cfg.mus.begin(), cfg.mus.end());
      cb = make_constellation_bounds(obj, otf, mu_hi);
    }
    for (std::size_t mu : cfg.mus) {
      ResultRow row;
      row.delta = delta;
      row.mu = mu;
      if (infinite) {
        const CholeskyDerivative d = derivative_recursive(pair, mu);
        const BoundResult res = k_tilde(pi, pair, d, d, cfg.rtol);
        row.has_bound = true;
        row.k_tilde = res.value;
        row.leading = leading_order(obj, otf, mu);
        row.tail = abs(res.shell_increments.back());
        row.norm_res = res.norm_residual;
        row.bmu_res = res.b_mu_residual;
        row.verdict = res.verdict;
        row.qsnr_v = qsnr(obj, otf, mu, cfg.photons, res).qsnr;
        if (otf.kind == OtfKind::gaussian) {
          row.has_direct = true;
          row.direct = direct_imaging_fisher(obj, otf, mu, cfg.photons);
        }
      } else {
        row.has_constellation = true;
        row.convexity = convexity_bound(cb, mu, cfg.photons);
        row.classical = classical_sim_bound(cb, mu, cfg.photons);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

constexpr const char* kCsvHeader =
    "delta,mu,k_tilde,leading_order,tail_estimate,norm_residual,b_mu_residual,verdict,qsnr,"
    "direct_fisher,convexity_bound,classical_sim_bound";

int run_bound(const RunConfig& cfg) {
  const std::vector<ResultRow> rows = compute_rows(cfg);
  if (cfg.write_csv) {
    std::string csv = std::string(kCsvHeader) + "\n";
    for (const ResultRow& r : rows) csv += row_csv(r) + "\n";
    write_text(cfg.out_dir + "/bound.csv", csv);
  }
  if (cfg.write_json) {
    json j;
    j["schema_version"] = 1;
    j["precision_bits"] = precision_bits();
    j["rows"] = json::array();
    for (const ResultRow& r : rows) j["rows"].push_back(row_json(r));
    write_text(cfg.out_dir + "/bound.json", j.dump(2) + "\n");
  }
  for (const ResultRow& r : rows)
    if (r.has_bound && r.verdict != Verdict::converged) return 2;
  return 0;
}

int run_scaling(const RunConfig& cfg) {
  if (cfg.deltas.size() < 3)
    throw InvalidConfig("scaling fit needs at least 3 delta values");
  const std::vector<ResultRow> rows = compute_rows(cfg);
  json report;
  report["schema_version"] = 1;
  report["fits"] = json::array();
  bool ok = true;
  for (std::size_t mu : cfg.mus) {
    std::vector<double> lx, ly;
    for (const ResultRow& r : rows)
      if (r.mu == mu && r.has_bound) {
        lx.push_back(std::log(r.delta.to_double()));
        ly.push_back(std::log(std::abs(r.k_tilde.to_double())));
      }
    if (lx.size() < 3) throw InvalidConfig("scaling fit needs k_tilde at >= 3 deltas");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double n = static_cast<double>(lx.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double target = -2.0 * static_cast<double>(mu / 2);
    const double dev = std::abs(slope - target);
    if (dev > 0.15) ok = false;
    json fit;
    fit["mu"] = mu;
    fit["fitted_slope"] = slope;
    fit["target_slope"] = target;
    fit["max_abs_deviation"] = dev;
    report["fits"].push_back(fit);
  }
  report["pass"] = ok;
  write_text(cfg.out_dir + "/scaling.json", report.dump(2) + "\n");
  if (cfg.write_csv) {
    std::string csv = std::string(kCsvHeader) + "\n";
    for (const ResultRow& r : rows) csv += row_csv(r) + "\n";
    write_text(cfg.out_dir + "/scaling.csv", csv);
  }
  return ok ? 0 : 2;
}

int run_snr(const RunConfig& cfg) {
  const OtfModel otf = make_otf(cfg);
  json report;
  report["schema_version"] = 1;
  report["rows"] = json::array();
  std::string csv = "delta,mu,qsnr,chi,chi_prime\n";
  for (const Real& delta : cfg.deltas) {
    const ObjectModel obj = make_object(cfg, delta);
    const MomentVector mv = moment_sequence(obj, 2 * cfg.q_max);
    const CholeskyPair pair = cholesky_factor(hankel(mv, cfg.q_max));
    const PiMatrix pi = pi_matrix(otf, cfg.q_max, run_w(cfg, obj, otf));
    for (std::size_t mu : cfg.mus) {
      const CholeskyDerivative d = derivative_recursive(pair, mu);
      const BoundResult res = k_tilde(pi, pair, d, d, cfg.rtol);
      const SnrResult s = qsnr(obj, otf, mu, cfg.photons, res);
      json j;
      j["delta"] = delta.str();
      j["mu"] = mu;
      j["qsnr"] = s.qsnr.str();
      j["chi"] = s.has_prefactor ? json(s.chi.str()) : json(nullptr);
      j["chi_prime"] = s.has_prefactor ? json(s.chi_prime.str()) : json(nullptr);
      report["rows"].push_back(j);
      csv += delta.str() + "," + std::to_string(mu) + "," + s.qsnr.str() + "," +
             (s.has_prefactor ? s.chi.str() : "") + "," +
             (s.has_prefactor ? s.chi_prime.str() : "") + "\n";
    }
  }
  if (cfg.write_json) write_text(cfg.out_dir + "/snr.json", report.dump(2) + "\n");
  if (cfg.write_csv) write_text(cfg.out_dir + "/snr.csv", csv);
  return 0;
}

int run_thermal(const RunConfig& cfg) {
  if (cfg.ensemble == 0) throw InvalidConfig("ensemble size must be positive");
  const Real floor(-1e-12);
  const std::vector<Real> eps_grid = {Real("0.001"), Real("0.01"), Real("0.1"), Real(1L),
                                      Real(10L),     Real(100L),  Real(1000L)};
  bool sandwich_ok = true, monotone_ok = true, uv_ok = true, ir_ok = true;
  Real sandwich_margin(1e300), monotone_margin(1e300), uv_worst, ir_worst;
  for (std::size_t i = 0; i < cfg.ensemble; ++i) {
    const ThermalModel model = make_random_model(cfg.seed + i, 4, 2);
    const Real eps = model.epsilon();
    const SymMatrix k_exact = thermal_qfi(model);
    const SymMatrix k_sld = sld_qfi(model);
    // sandwich: eps K(Gamma) - K(rho) is PSD
    SymMatrix lhs(k_sld.size());
    for (std::size_t a = 0; a < lhs.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b) lhs(a, b) = eps * k_sld(a, b) - k_exact(a, b);
    const Real lam = smallest_eigenvalue(lhs);
    sandwich_margin = min(sandwich_margin, lam);
    if (lam < floor) sandwich_ok = false;
    // kappa(eps) = K/eps nonincreasing in PSD order
    const std::vector<SymMatrix> kappa = kappa_curve(model, eps_grid);
    for (std::size_t g = 0; g + 1 < kappa.size(); ++g) {
      SymMatrix diff(kappa[g].size());
      for (std::size_t a = 0; a < diff.size(); ++a)
        for (std::size_t b = 0; b <= a; ++b) diff(a, b) = kappa[g](a, b) - kappa[g + 1](a, b);
      const Real lam2 = smallest_eigenvalue(diff);
      monotone_margin = min(monotone_margin, lam2);
      if (lam2 < floor) monotone_ok = false;
    }
    // weak-source limit: K(rho)/eps -> K(Gamma)
    const Real eps_weak("0.001");
    const ThermalModel weak = model.with_epsilon(eps_weak);
    const SymMatrix k_weak = thermal_qfi(weak);
    const SymMatrix k_gamma = sld_qfi(weak);  // invariant under the eps scaling
    Real rel;
    for (std::size_t a = 0; a < k_weak.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b)
        rel = max(rel, abs(k_weak(a, b) / eps_weak - k_gamma(a, b)) / abs(k_gamma(a, a)));
    uv_worst = max(uv_worst, rel);
    if (rel > Real("0.01")) uv_ok = false;
    // strong-source limit: K(rho) -> J(Phi)
    const ThermalModel strong = model.with_epsilon(Real(1000L));
    const SymMatrix k_strong = thermal_qfi(strong);
    const SymMatrix jphi = infrared_fisher(strong);
    Real rel2;
    for (std::size_t a = 0; a < k_strong.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b)
        rel2 = max(rel2, abs(k_strong(a, b) - jphi(a, b)) / abs(jphi(a, a)));
    ir_worst = max(ir_worst, rel2);
    if (rel2 > Real("0.01")) ir_ok = false;
  }
  json report;
  report["schema_version"] = 1;
  report["seed"] = cfg.seed;
  report["ensemble"] = cfg.ensemble;
  auto prop = [](bool pass, const Real& margin) {
    json p;
    p["pass"] = pass;
    p["worst_margin"] = margin.str();
    return p;
  };
  report["properties"]["sandwich_psd"] = prop(sandwich_ok, sandwich_margin);
  report["properties"]["kappa_nonincreasing"] = prop(monotone_ok, monotone_margin);
  report["properties"]["weak_source_limit"] = prop(uv_ok, uv_worst);
  report["properties"]["strong_source_limit"] = prop(ir_ok, ir_worst);
  const bool all = sandwich_ok && monotone_ok && uv_ok && ir_ok;
  report["pass"] = all;
  write_text(cfg.out_dir + "/thermal.json", report.dump(2) + "\n");
  return all ? 0 : 2;
}

int run_validate(const RunConfig& cfg) {
  const OtfModel otf = make_otf(cfg);
  json report;
  report["schema_version"] = 1;
  report["precision_bits"] = precision_bits();
  report["checks"] = json::array();
  for (const Real& delta : cfg.deltas) {
    const ObjectModel obj = make_object(cfg, delta);
    json c;
    c["delta"] = delta.str();
    if (obj.infinite_support()) {
      const MomentVector mv = moment_sequence(obj, 2 * cfg.q_max);
      const HankelSet h = hankel(mv, cfg.q_max);
      c["hankel_positive_definite"] = h.positive_definite;
      const Real w = run_w(cfg, obj, otf);
      const PiMatrix pi = pi_matrix(otf, cfg.q_max, w);
      const TraceCheck tc = pi_trace_check(pi, delta);
      c["w"] = w.str();
      c["trace_converged"] = tc.converged;
      c["trace_value"] = tc.value.str();
      if (tc.has_window) {
        c["window_lo"] = tc.window_lo.str();
        c["window_hi"] = tc.window_hi.str();
        c["window_feasible"] = tc.feasible;
      }
    } else {
      c["constellation_points"] = obj.point_x.size();
    }
    report["checks"].push_back(c);
  }
  write_text(cfg.out_dir + "/validate.json", report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher-information bounds for subdiffraction moment estimation"};
  app.require_subcommand(1);
  CliArgs args;
  std::string chosen;
  const std::pair<const char*, const char*> subs[] = {
      {"bound", "compute the truncated quantum bound for each (delta, mu)"},
      {"scaling", "fit the width scaling exponent of the bound over a delta sweep"},
      {"snr", "per-order quantum signal-to-noise ratios and prefactors"},
      {"thermal", "thermal-state QFI checks over a random model ensemble"},
      {"validate", "input sanity checks: moment matrices, scaling window, trace"}};
  for (const auto& [name, desc] : subs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config_path, "run configuration file")->required();
    sub->add_option("--out", args.out_dir, "output directory (overrides config)");
    sub->add_option("--precision", args.precision, "working precision in bits");
    sub->callback([&chosen, name]() { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    const RunConfig cfg = load_config(args);
    if (chosen == "bound") return run_bound(cfg);
    if (chosen == "scaling") return run_scaling(cfg);
    if (chosen == "snr") return run_snr(cfg);
    if (chosen == "thermal") return run_thermal(cfg);
    return run_validate(cfg);
  } catch (const Error& e) {
    json err;
    err["schema_version"] = 1;
    err["error"]["code"] = e.code();
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["schema_version"] = 1;
    err["error"]["code"] = "internal";
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
