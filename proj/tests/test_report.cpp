#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "escapelab/report.hpp"

using namespace escapelab;

namespace {

bool keys_sorted(const Json& j) {
  if (j.is_object()) {
    std::string prev;
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first && !(prev < k)) return false;
      prev = k;
      first = false;
      if (!keys_sorted(v)) return false;
    }
  }
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!keys_sorted(v)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("manifest omits wall time from JSON") {
  RunManifest m;
  m.command_line = "escapelab itinerary --lambda 1,0";
  m.seed = 7;
  m.lambda = {0.5, -0.25};
  m.wall_time_seconds = 12.5;
  const Json j = as_json(m);
  CHECK_FALSE(j.contains("wall_time_seconds"));
  CHECK(j["seed"] == 7);
  CHECK(j["lambda"][0] == 0.5);
  CHECK(j["lambda"][1] == -0.25);
  CHECK(j["version"] == kToolVersion);

  const std::string lines = as_comment_lines(m);
  CHECK(lines.find("# seed: 7\n") != std::string::npos);
  CHECK(lines.find("# command_line: escapelab itinerary --lambda 1,0\n") != std::string::npos);
  CHECK(lines.find("wall") == std::string::npos);
}

TEST_CASE("certificate fields and non-finite values") {
  EscapeCertificate c;
  c.category = Category::UniformSlow;
  c.horizon = 30;
  c.N = 2;
  c.R = 20.0;
  c.C1 = 0.5;
  c.C2 = 3.0;
  c.C = std::nan("");
  c.window_first = 2;
  c.window_last = 30;
  const Json j = as_json(c);
  CHECK(j["category"] == to_string(Category::UniformSlow));
  CHECK(j["C"].is_null());
  CHECK(j["R"] == 20.0);
  CHECK(j["window_checked"] == Json::array({2, 30}));
  CHECK(keys_sorted(j));
  CHECK(j.dump().find("NaN") == std::string::npos);
}

TEST_CASE("complex values become two-element arrays") {
  const Json j = as_json(std::complex<double>(1.5, -2.0));
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0] == 1.5);
  CHECK(j[1] == -2.0);
  CHECK(as_json(std::complex<double>(INFINITY, 0.0))[0].is_null());
}

TEST_CASE("density report without sampling") {
  const auto v = verify_density(ExpMap(1.0), HalfAnnulus(10.0, 70.0), HalfAnnulus(std::numbers::e, std::exp(2.0)), 0, 3, 4);
  const Json j = as_json(v);
  CHECK(j["mc_density"].is_null());
  CHECK(j["mc_stderr"].is_null());
  CHECK(j["component_count"] == 18);
  CHECK(j["pass"] == true);
  CHECK(keys_sorted(j));
}

TEST_CASE("text rendering flattens nested keys") {
  const Json j = {{"b", {{"c", 1}, {"d", "x"}}}, {"a", true}};
  CHECK(as_text(j) == "a: true\nb.c: 1\nb.d: x\n");
}

TEST_CASE("construction audit lists depths and a verdict") {
  ConstructionConfig config;
  config.t = seq_linear(501);
  const McMullenResult r = proof_mcmullen(config.R, config.t, config.tau0, 500);
  const Json j = construction_audit(config, r, 50);
  CHECK(j["config"]["R"] == 20.0);
  CHECK(j["config"]["depth"] == 500);
  const Json& rows = j["per_depth"];
  REQUIRE(rows.is_array());
  CHECK(rows.size() <= 51);
  CHECK(rows.size() >= 2);
  CHECK(rows.back()["n"] == r.running.back().first);
  CHECK(j["verdicts"]["value"].get<double>() == doctest::Approx(r.value));
  for (const Json& row : rows) {
    CHECK(row.contains("delta"));
    CHECK(row.contains("diam"));
    CHECK(row.contains("bound_value"));
  }
}
