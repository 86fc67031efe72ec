// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uvnlos/cli/runner.hpp"
#include "uvnlos/cli/scenario.hpp"
#include "uvnlos/error.hpp"

using namespace uvnlos;
using namespace uvnlos::cli;
namespace fs = std::filesystem;

namespace {

std::string field_of(const nlohmann::json& j) {
  try {
    validate(parse_scenario(j));
  } catch (const DomainError& e) {
    return e.field();
  }
  return "";
}

nlohmann::json base_json() {
  std::ifstream is(std::string(UVNLOS_SCENARIO_DIR) + "/table7_scenario1.json");
  return nlohmann::json::parse(is);
}

}  // namespace

TEST_CASE("bundled scenarios round-trip through JSON") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(UVNLOS_SCENARIO_DIR)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    const Scenario s = load_scenario(e.path().string());
    CHECK_NOTHROW(validate(s));
    const Scenario back = parse_scenario(to_json(s));
    CHECK(back == s);
    CHECK(to_json(back) == to_json(s));
    ++n;
  }
  CHECK(n == 13);
}

TEST_CASE("unknown keys and conflicting units name the field") {
  auto j = base_json();
  j["geometry"]["range_m"] = 10;
  CHECK(field_of(j) == "geometry.range_m");

  j = base_json();
  j["geometry"]["angles_rad"] = {{"beta_t", 0.5}};
  CHECK(field_of(j).find("beta_t") != std::string::npos);

  j = base_json();
  j["geometry"]["elevation_bounds"] = "strict";
  CHECK(field_of(j) == "geometry.delta_t_low");

  j = base_json();
  j["obstacle"]["x_o"] = 0.0;
  CHECK(!field_of(j).empty());

  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST_CASE("sweep value lists") {
  std::string unit;
  CHECK(parse_values("1,2.5,4", unit) == std::vector<double>{1, 2.5, 4});
  CHECK(unit.empty());
  CHECK(parse_values("5:40:5deg", unit).size() == 8);
  CHECK(unit == "deg");
  CHECK(parse_values("40:200:10", unit).back() == doctest::Approx(200));
  CHECK_THROWS_AS(parse_values("1:2:0", unit), DomainError);
  CHECK(parse_model("exact+obstacle+reflection") == Model::total);
  CHECK(parse_models("exact,mcpt") == std::vector<Model>{Model::exact, Model::mcpt});
  CHECK_THROWS_AS(parse_model("raytrace"), DomainError);
  CHECK(is_angle_variable("theta_r"));
  CHECK(!is_angle_variable("range_r"));
  Scenario s = load_scenario(std::string(UVNLOS_SCENARIO_DIR) + "/table8_alpha0.json");
  set_variable(s, "alpha", 0.1);
  CHECK(s.obstacle->alpha == 0.1);
  CHECK_THROWS_AS(set_variable(s, "temperature", 1.0), DomainError);
}

TEST_CASE("sweep reproduces the golden table") {
  const Scenario s = load_scenario(std::string(UVNLOS_SCENARIO_DIR) + "/fig9_r50.json");
  SweepSpec spec = *s.sweep;
  std::string unit;
  spec.values = parse_values("10:30:10deg", unit);
  spec.unit = unit;
  std::ostringstream out;
  write_csv(out, run_sweep(s, spec));
  std::istringstream got_s(out.str());
  std::ifstream want_s(std::string(UVNLOS_TEST_DIR) + "/golden/sweep_fig9_small.csv");
  const CsvData got = read_csv(got_s), want = read_csv(want_s);
  REQUIRE(got.header == want.header);
  REQUIRE(got.rows.size() == want.rows.size());
  for (size_t i = 0; i < got.rows.size(); ++i) {
    for (size_t k = 0; k < got.header.size(); ++k) {
      if (want.rows[i][k].empty()) {
        CHECK(got.rows[i][k].empty());
        continue;
      }
      CHECK(std::stod(got.rows[i][k]) == doctest::Approx(std::stod(want.rows[i][k])).epsilon(1e-7));
    }
  }
  CHECK(out.str().rfind("# schema=uvnlos.sweep/1", 0) == 0);
}

TEST_CASE("rmse between columns") {
  std::istringstream is("# schema=uvnlos.sweep/1\nx,a_db,b_db,c_db,error\n1,10,10.5,10,\n2,20,20.5,inf,\n3,30,30.5,30,\n");
  const CsvData d = read_csv(is);
  CHECK(rmse(d, "a", "a").rmse_db == 0.0);
  const RmseResult r = rmse(d, "a", "b_db");
  CHECK(r.rmse_db == doctest::Approx(0.5));
  CHECK(r.n == 3);
  CHECK(rmse(d, "a", "c").n == 2);
  CHECK_THROWS_AS(rmse(d, "a", "mcpt"), MissingColumn);
}

TEST_CASE("single-point sweep equals run") {
  Scenario s = load_scenario(std::string(UVNLOS_SCENARIO_DIR) + "/table8_alpha5.json");
  SweepSpec spec{"range_r", {120.0}, "", {Model::obstacle, Model::total}};
  const SweepTable t = run_sweep(s, spec);
  REQUIRE(t.rows.size() == 1);
  set_variable(s, "range_r", 120.0);
  const auto direct = run_models(s, spec.models);
  for (size_t k = 0; k < direct.size(); ++k) CHECK(t.rows[0].results[k].pathloss_db == direct[k].pathloss_db);
}

TEST_CASE("run output") {
  const Scenario s = load_scenario(std::string(UVNLOS_SCENARIO_DIR) + "/table8_alpha0.json");
  const auto results = run_models(s, {Model::exact, Model::reflection});
  const auto j = results_to_json(s, results);
  CHECK(j["schema"] == "uvnlos.run/1");
  CHECK(j["results"].size() == 2);
  CHECK(j["results"][1]["model"] == "reflection");
  CHECK(j["results"][1]["pathloss_db"].is_number());
  CHECK(exit_code_for(results) == 0);
  std::ostringstream table;
  print_table(table, results);
  CHECK(table.str().find("reflection") != std::string::npos);

  auto none = s;
  none.obstacle.reset();
  CHECK_THROWS_AS(run_model(none, Model::reflection), DomainError);
  PathLossResult empty;
  empty.status = Status::empty_overlap;
  CHECK(exit_code_for({empty, empty}) == 3);
}
