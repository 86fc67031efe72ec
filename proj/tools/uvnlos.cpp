// SPDX-License-Identifier: Apache-2.0
// uvnlos: path-loss runs, parameter sweeps and RMSE comparison.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "uvnlos/cli/runner.hpp"
#include "uvnlos/error.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 4;

int cmd_run(const std::string& path, const std::string& models, const std::string& out) {
  using namespace uvnlos::cli;
  const Scenario s = load_scenario(path);
  std::vector<Model> list;
  if (!models.empty()) {
    list = parse_models(models);
  } else if (s.obstacle) {
    list = {Model::exact, Model::obstacle, Model::total};
  } else {
    list = {Model::exact};
  }
  const auto results = run_models(s, list);
  if (out == "table") {
    print_table(std::cout, results);
  } else {
    std::cout << results_to_json(s, results).dump(2) << '\n';
    print_table(std::cerr, results);
  }
  return exit_code_for(results);
}

int cmd_sweep(const std::string& path, const std::string& var, const std::string& values,
              const std::string& models, const std::string& out) {
  using namespace uvnlos::cli;
  const Scenario s = load_scenario(path);
  SweepSpec spec = s.sweep.value_or(SweepSpec{});
  if (!var.empty()) {
    spec.var = var;
    if (values.empty()) throw uvnlos::DomainError("values", "--values is required with --var");
  }
  if (!values.empty()) {
    spec.values = parse_values(values, spec.unit);
    if (spec.unit.empty() && is_angle_variable(spec.var)) spec.unit = "rad";
  }
  if (!models.empty()) spec.models = parse_models(models);
  if (spec.var.empty()) throw uvnlos::DomainError("sweep.var", "no sweep variable given");
  if (spec.values.empty()) throw uvnlos::DomainError("sweep.values", "no sweep values given");
  if (spec.models.empty()) spec.models = {Model::exact};

  const SweepTable table = run_sweep(s, spec);
  if (out.empty() || out == "-") {
    write_csv(std::cout, table);
  } else {
    std::ofstream f(out);
    if (!f) throw uvnlos::IoError("cannot write " + out);
    write_csv(f, table);
    if (!f) throw uvnlos::IoError("write failed: " + out);
  }
  return 0;
}

int cmd_rmse(const std::string& path, const std::string& a, const std::string& b) {
  using namespace uvnlos::cli;
  std::ifstream f(path);
  if (!f) throw uvnlos::IoError("cannot open " + path);
  const CsvData data = read_csv(f);
  const RmseResult r = rmse(data, a, b);
  if (r.n == 0) throw uvnlos::DomainError("rmse", "no rows with finite values in both columns");
  fmt::print("{:.4f}\n", r.rmse_db);
  fmt::print(stderr, "rmse({}, {}) = {:.2f} dB over {} rows\n", a, b, r.rmse_db, r.n);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultraviolet NLoS path loss with obstacle scattering and reflection"};
  app.require_subcommand(1);

  std::string scenario, models, out = "json";
  auto* run = app.add_subcommand("run", "Evaluate path-loss models for a scenario");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--models", models, "Comma-separated: exact,obstacle,reflection,total,simplified,mcpt");
  run->add_option("--out", out, "Output format")->check(CLI::IsMember({"json", "table"}));

  std::string sweep_scenario, var, values, sweep_models, csv_out;
  auto* sweep = app.add_subcommand("sweep", "Sweep one variable and write CSV");
  sweep->add_option("scenario", sweep_scenario, "Scenario JSON file")->required();
  sweep->add_option("--var", var, "Variable to sweep");
  sweep->add_option("--values", values, "List a,b,c or range start:stop:step, optional 'deg' suffix");
  sweep->add_option("--models", sweep_models, "Comma-separated model list");
  sweep->add_option("--out", csv_out, "CSV path, '-' for stdout");

  std::string csv_path, col_a, col_b;
  auto* rmse = app.add_subcommand("rmse", "RMSE between two CSV columns");
  rmse->add_option("csv", csv_path, "Sweep CSV")->required();
  rmse->add_option("--a", col_a, "First column or model")->required();
  rmse->add_option("--b", col_b, "Second column or model")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(scenario, models, out);
    if (*sweep) return cmd_sweep(sweep_scenario, var, values, sweep_models, csv_out);
    if (*rmse) return cmd_rmse(csv_path, col_a, col_b);
  } catch (const uvnlos::DomainError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const uvnlos::MissingColumn& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const uvnlos::UnclassifiableError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const uvnlos::IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitIo;
  }
  return 0;
}
