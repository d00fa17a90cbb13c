#include "qbound/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Real> parse_reals(const std::string& s) {
  std::vector<Real> out;
  for (const std::string& v : split_csv(s)) out.emplace_back(v);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig("line " + std::to_string(lineno) + " is not `key = value`");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }

  RunConfig cfg;
  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::pair<bool, std::string>{false, ""};
    std::pair<bool, std::string> r{true, it->second};
    kv.erase(it);
    return r;
  };

  if (auto [ok, v] = take("object.kind"); ok) {
    if (v == "gaussian") cfg.object_kind = ObjectKind::gaussian;
    else if (v == "uniform") cfg.object_kind = ObjectKind::uniform;
    else if (v == "points") cfg.object_kind = ObjectKind::points;
    else if (v == "table") cfg.object_kind = ObjectKind::table;
    else throw InvalidConfig("unknown object.kind: " + v);
  }
  if (auto [ok, v] = take("object.delta"); ok) cfg.deltas = parse_reals(v);
  if (auto [ok, v] = take("object.center"); ok) cfg.center = Real(v);
  if (auto [ok, v] = take("object.points.x"); ok) cfg.points_x = parse_reals(v);
  if (auto [ok, v] = take("object.points.w"); ok) cfg.points_w = parse_reals(v);
  if (auto [ok, v] = take("object.table"); ok) cfg.object_table = v;

  if (auto [ok, v] = take("otf.kind"); ok) {
    if (v == "gaussian") cfg.otf_kind = OtfKind::gaussian;
    else if (v == "bandlimited") cfg.otf_kind = OtfKind::bandlimited;
    else if (v == "custom") cfg.otf_kind = OtfKind::custom;
    else throw InvalidConfig("unknown otf.kind: " + v);
  }
  if (auto [ok, v] = take("otf.beta"); ok) cfg.beta = Real(v);
  if (auto [ok, v] = take("otf.table"); ok) cfg.otf_table = v;

  if (auto [ok, v] = take("compute.mu"); ok)
    for (const std::string& m : split_csv(v)) cfg.mus.push_back(std::stoul(m));
  if (auto [ok, v] = take("compute.q_max"); ok) cfg.q_max = std::stoul(v);
  if (auto [ok, v] = take("compute.precision_bits"); ok) cfg.precision_bits = std::stoul(v);
  if (auto [ok, v] = take("compute.w"); ok) {
    if (v == "auto") cfg.w_auto = true;
    else { cfg.w_auto = false; cfg.w = Real(v); }
  }
  if (auto [ok, v] = take("compute.rtol"); ok) cfg.rtol = Real(v);
  if (auto [ok, v] = take("compute.photons"); ok) cfg.photons = Real(v);
  if (auto [ok, v] = take("compute.seed"); ok) cfg.seed = std::stoull(v);
  if (auto [ok, v] = take("compute.ensemble"); ok) cfg.ensemble = std::stoul(v);

  if (auto [ok, v] = take("output.dir"); ok) cfg.out_dir = v;
  if (auto [ok, v] = take("output.formats"); ok) {
    cfg.write_csv = cfg.write_json = false;
    for (const std::string& f : split_csv(v)) {
      if (f == "csv") cfg.write_csv = true;
      else if (f == "json") cfg.write_json = true;
      else throw InvalidConfig("unknown output format: " + f);
    }
  }
  if (!kv.empty()) throw InvalidConfig("unknown key: " + kv.begin()->first);

  // defaults and validation
  if (cfg.deltas.empty()) cfg.deltas.push_back(Real(1L));
  for (const Real& d : cfg.deltas)
    if (!(d > Real(0L))) throw InvalidConfig("delta must be positive");
  if (cfg.mus.empty()) cfg.mus = {1, 2};
  for (std::size_t mu : cfg.mus)
    if (mu < 1) throw InvalidConfig("mu must be >= 1");
  if (cfg.precision_bits < 64) throw InvalidConfig("precision must be >= 64 bits");
  if (!cfg.write_csv && !cfg.write_json) throw InvalidConfig("output formats must be non-empty");
  if (cfg.object_kind == ObjectKind::points &&
      (cfg.points_x.empty() || cfg.points_x.size() != cfg.points_w.size()))
    throw InvalidConfig("points object needs matching object.points.x / object.points.w");
  if (cfg.object_kind == ObjectKind::table && cfg.object_table.empty())
    throw InvalidConfig("table object needs object.table");
  if (cfg.otf_kind == OtfKind::custom && cfg.otf_table.empty())
    throw InvalidConfig("custom otf needs otf.table");
  if (!(cfg.rtol > Real(0L))) throw InvalidConfig("rtol must be positive");
  return cfg;
}

ObjectModel make_object(const RunConfig& cfg, const Real& delta) {
  switch (cfg.object_kind) {
    case ObjectKind::gaussian:
      return ObjectModel::gaussian(delta, cfg.center);
    case ObjectKind::uniform:
      return ObjectModel::uniform(delta, cfg.center);
    case ObjectKind::points:
      return ObjectModel::points(delta, cfg.points_x, cfg.points_w);
    case ObjectKind::table:
      return ObjectModel::table_from_csv(delta, cfg.object_table);
  }
  throw InvalidConfig("unreachable object kind");
}

OtfModel make_otf(const RunConfig& cfg) {
  switch (cfg.otf_kind) {
    case OtfKind::gaussian:
      return OtfModel::gaussian(cfg.beta);
    case OtfKind::bandlimited:
      return OtfModel::bandlimited(cfg.beta);
    case OtfKind::custom:
      return OtfModel::custom_from_csv(cfg.otf_table);
  }
  throw InvalidConfig("unreachable otf kind");
}

}  // namespace qbound
