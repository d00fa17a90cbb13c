#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "qbound/config.hpp"
#include "qbound/errors.hpp"
#include "qbound/real.hpp"

using namespace qbound;

namespace {

std::string write_config(const std::string& body) {
  const std::string path = "/tmp/qbound_test_config.cfg";
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("full config round trip") {
  const std::string path = write_config(
      "# comment line\n"
      "object.kind = uniform\n"
      "object.delta = 0.04, 0.02, 0.01\n"
      "object.center = 0.25\n"
      "otf.kind = bandlimited\n"
      "otf.beta = 1.5\n"
      "compute.mu = 1, 2, 3\n"
      "compute.q_max = 18\n"
      "compute.precision_bits = 320\n"
      "compute.w = 0.2\n"
      "compute.rtol = 1e-9\n"
      "compute.photons = 500\n"
      "compute.seed = 7\n"
      "compute.ensemble = 25\n"
      "output.dir = /tmp/qbound_out\n"
      "output.formats = csv\n");
  const RunConfig cfg = parse_config(path);
  CHECK(cfg.object_kind == ObjectKind::uniform);
  REQUIRE(cfg.deltas.size() == 3);
  CHECK(cfg.deltas[1] == Real("0.02"));
  CHECK(cfg.center == Real("0.25"));
  CHECK(cfg.otf_kind == OtfKind::bandlimited);
  CHECK(cfg.beta == Real("1.5"));
  REQUIRE(cfg.mus.size() == 3);
  CHECK(cfg.mus[2] == 3);
  CHECK(cfg.q_max == 18);
  CHECK(cfg.precision_bits == 320);
  CHECK(!cfg.w_auto);
  CHECK(cfg.w == Real("0.2"));
  CHECK(cfg.rtol == Real("1e-9"));
  CHECK(cfg.photons == Real(500L));
  CHECK(cfg.seed == 7);
  CHECK(cfg.ensemble == 25);
  CHECK(cfg.out_dir == "/tmp/qbound_out");
  CHECK(cfg.write_csv);
  CHECK(!cfg.write_json);
}

TEST_CASE("defaults fill in for a minimal config") {
  const RunConfig cfg = parse_config(write_config("object.kind = gaussian\n"));
  CHECK(cfg.deltas.size() == 1);
  CHECK(cfg.mus.size() == 2);
  CHECK(cfg.q_max == 30);
  CHECK(cfg.precision_bits == 256);
  CHECK(cfg.w_auto);
  CHECK(cfg.write_csv);
  CHECK(cfg.write_json);
}

TEST_CASE("validation failures") {
  CHECK_THROWS_AS(parse_config(write_config("object.delta = 0\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("object.delta = -0.1\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("compute.mu = 0\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("compute.precision_bits = 32\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("output.formats =\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("output.formats = yaml\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("object.kind = blob\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("no_equals_sign\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("unknown.key = 1\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("object.kind = points\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config(write_config("object.kind = table\n")), InvalidConfig);
  CHECK_THROWS_AS(parse_config("/tmp/definitely_missing_config_file.cfg"), InvalidConfig);
}

TEST_CASE("delta-zero error carries the documented message") {
  try {
    parse_config(write_config("object.delta = 0\n"));
    FAIL("expected InvalidConfig");
  } catch (const InvalidConfig& e) {
    CHECK(std::string(e.what()) == "invalid_config: delta must be positive");
  }
}

TEST_CASE("object and otf factories honor the config") {
  const RunConfig cfg = parse_config(write_config(
      "object.kind = points\n"
      "object.points.x = -1, 0, 1\n"
      "object.points.w = 1, 2, 1\n"
      "otf.kind = gaussian\n"
      "otf.beta = 2\n"));
  const ObjectModel obj = make_object(cfg, Real("0.1"));
  CHECK(obj.kind == ObjectKind::points);
  REQUIRE(obj.point_x.size() == 3);
  // weights renormalized to unit sum
  CHECK(abs(obj.point_w[1] - Real("0.5")) < pow2(-240));
  const OtfModel otf = make_otf(cfg);
  CHECK(otf.kind == OtfKind::gaussian);
  CHECK(otf.beta == Real(2L));
}
