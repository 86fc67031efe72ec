// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "uvnlos/cli/scenario.hpp"
#include "uvnlos/result.hpp"

namespace uvnlos::cli {

PathLossResult run_model(const Scenario& s, Model m);
std::vector<PathLossResult> run_models(const Scenario& s, const std::vector<Model>& models);

nlohmann::ordered_json results_to_json(const Scenario& s, const std::vector<PathLossResult>& results);
void print_table(std::ostream& os, const std::vector<PathLossResult>& results);

inline constexpr const char* kSweepSchema = "uvnlos.sweep/1";

struct SweepRow {
  double value{0.0};
  std::vector<PathLossResult> results;
  std::string error;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;
};

SweepTable run_sweep(const Scenario& base, const SweepSpec& spec);
void write_csv(std::ostream& os, const SweepTable& t);
std::vector<std::string> csv_header(const SweepSpec& spec);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvData read_csv(std::istream& is);

struct RmseResult {
  double rmse_db{0.0};
  int n{0};
};

/// RMSE between two columns; a model name resolves to "<model>_db". Throws MissingColumn.
RmseResult rmse(const CsvData& data, const std::string& a, const std::string& b);

int exit_code_for(const std::vector<PathLossResult>& results);

}  // namespace uvnlos::cli
