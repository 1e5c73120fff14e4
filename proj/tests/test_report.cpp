#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fading/errors.hpp"
#include "fading/report.hpp"

using namespace fading;
using nlohmann::ordered_json;

TEST_CASE("bits rescale information values only") {
  FadingNumberReport r;
  r.kind = ReportKind::best_lower_bound;
  r.value = std::log(2.0);
  r.direction = CVector::Unit(2, 0);
  r.diagnostics["memory_term"] = 2.0 * std::log(2.0);
  r.diagnostics["kappa"] = 8.0;
  r.diagnostics["kappa_curve_4"] = -std::log(2.0);
  const ordered_json nats = to_json(r);
  const ordered_json bits = to_json(r, Units::bits);
  CHECK(nats["value"].get<double>() == doctest::Approx(std::log(2.0)));
  CHECK(bits["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bits["units"] == "bits");
  CHECK(bits["kind"] == "best_lower_bound");
  CHECK(bits["diagnostics"]["memory_term"].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(bits["diagnostics"]["kappa_curve_4"].get<double>() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(bits["diagnostics"]["kappa"].get<double>() == 8.0);
  CHECK(to_units(3.0, Units::nats) == 3.0);
}

TEST_CASE("complex vectors serialise as [re, im] pairs") {
  CVector v(2);
  v << Complex(1.0, -2.0), 0.5;
  const ordered_json j = to_json(v);
  CHECK(j.dump() == "[[1.0,-2.0],[0.5,0.0]]");
}

TEST_CASE("bound evaluations") {
  BoundEvaluation b;
  b.bracket_value = -1.0;
  b.standard_error = 0.0;
  b.kappa = 3;
  b.direction_sequence = {CVector::Unit(2, 1)};
  const ordered_json j = to_json(b);
  CHECK(j["method"] == "gaussian_analytic");
  CHECK(j["kappa"] == 3);
  CHECK(j["direction_sequence"].size() == 1);
}

TEST_CASE("report documents are deterministic and echo the config") {
  ordered_json echo;
  echo["model"] = "a.json";
  echo["seed"] = 9;
  ordered_json result;
  result["value"] = 0.1;
  const std::string a = render_report("dstar", echo, 9, result);
  const std::string b = render_report("dstar", echo, 9, result);
  CHECK(a == b);
  const ordered_json doc = ordered_json::parse(a);
  CHECK(doc["library"] == "fading");
  CHECK(doc["version"] == std::string(kLibraryVersion));
  CHECK(doc["command"] == "dstar");
  CHECK(doc["seed"] == 9);
  CHECK(doc["config"]["model"] == "a.json");
  CHECK(doc["result"]["value"].get<double>() == 0.1);
}

TEST_CASE("simulation tables and charts") {
  SimulationTable t;
  t.reference_chi = -1.5772;
  t.direction = CVector::Unit(1, 0);
  t.rows.push_back({40.0, 1e4, 0.68, -1.5366, 1e-11});
  t.rows.push_back({60.0, 1e6, 1.04, -1.5889, 1e-11});
  const ordered_json j = to_json(t);
  CHECK(j["rows"].size() == 2);
  CHECK(j["input_kind"] == "log_uniform_peak");
  const std::string svg = render_svg(t);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("nats") != std::string::npos);
  CHECK(render_svg(t, Units::bits).find("bits") != std::string::npos);
  CHECK(svg == render_svg(t));
}

TEST_CASE("write_file") {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "fading_report_test.txt";
  write_file(p, "abc\n");
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str() == "abc\n");
  std::filesystem::remove(p);
  CHECK_THROWS_AS(write_file("/nonexistent_dir/x/y.txt", "z"), Error);
}
