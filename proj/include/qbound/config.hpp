#ifndef QBOUND_CONFIG_HPP
#define QBOUND_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qbound/moments.hpp"
#include "qbound/otf.hpp"
#include "qbound/real.hpp"

namespace qbound {

/// Declarative run description parsed from a flat key = value file
/// (sections by key prefix: object.*, otf.*, compute.*, output.*).
struct RunConfig {
  // object.*
  ObjectKind object_kind = ObjectKind::gaussian;
  std::vector<Real> deltas;  // one or a sweep
  Real center{0L};
  std::vector<Real> points_x, points_w;
  std::string object_table;

  // otf.*
  OtfKind otf_kind = OtfKind::gaussian;
  Real beta{1L};
  std::string otf_table;

  // compute.*
  std::vector<std::size_t> mus;
  std::size_t q_max = 30;
  std::size_t precision_bits = 256;
  bool w_auto = true;
  Real w{1L};
  Real rtol{1e-8};
  Real photons{1L};
  std::uint64_t seed = 1;
  std::size_t ensemble = 50;

  // output.*
  std::string out_dir = ".";
  bool write_csv = true;
  bool write_json = true;
};

/// Parses and validates; throws InvalidConfig on any violation.
RunConfig parse_config(const std::string& path);

ObjectModel make_object(const RunConfig& cfg, const Real& delta);
OtfModel make_otf(const RunConfig& cfg);

}  // namespace qbound

#endif  // QBOUND_CONFIG_HPP
