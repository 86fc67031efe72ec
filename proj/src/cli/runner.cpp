// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uvnlos/error.hpp"

namespace uvnlos::cli {

using nlohmann::json;

PathLossResult run_model(const Scenario& s, Model m) {
  validate(s);
  const auto obstacle = build_obstacle(s);
  const geometry::Obstacle* o = obstacle ? &*obstacle : nullptr;
  const double q_t = s.source_energy_j;
  switch (m) {
    case Model::exact: {
      PathLossResult r = scattering::integrate_scattering(s.geometry, nullptr, s.atmosphere, q_t, s.scatter);
      r.model = "exact";
      return r;
    }
    case Model::obstacle:
      return scattering::integrate_scattering(s.geometry, o, s.atmosphere, q_t, s.scatter);
    case Model::reflection:
      if (!o) throw DomainError("obstacle", "the reflection model needs an obstacle");
      return reflection::integrate_reflection(s.geometry, *o, s.atmosphere, s.reflection, q_t, s.grid);
    case Model::total:
      return reflection::total_pathloss(s.geometry, o, s.atmosphere, s.reflection, q_t, s.scatter, s.grid);
    case Model::simplified: {
      simplified::SimplifiedConfig c = s.simplified;
      c.beta = s.simplified_beta_ratio * s.geometry.beta_t;
      return simplified::simplified_pathloss(s.geometry, s.atmosphere, q_t, c);
    }
    case Model::mcpt: {
      mcpt::McptResult r = mcpt::estimate_pathloss(s.mcpt, s.geometry, o, s.atmosphere, s.reflection, q_t);
      r.summary.model = "mcpt";
      return r.summary;
    }
  }
  throw DomainError("models", "unknown model");
}

std::vector<PathLossResult> run_models(const Scenario& s, const std::vector<Model>& models) {
  std::vector<PathLossResult> out;
  out.reserve(models.size());
  for (Model m : models) out.push_back(run_model(s, m));
  return out;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

ojson results_to_json(const Scenario& s, const std::vector<PathLossResult>& results) {
  ojson arr = ojson::array();
  for (const auto& r : results) {
    ojson diag = ojson::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = finite_or_null(v);
    ojson row = ojson::object();
    row["model"] = r.model;
    row["status"] = to_string(r.status);
    row["pathloss_db"] = finite_or_null(r.pathloss_db);
    row["error_estimate_db"] = finite_or_null(r.error_estimate_db);
    row["q_t"] = r.q_t;
    row["q_r"] = r.q_r;
    row["q_r_sca"] = r.q_r_sca;
    row["q_r_ref"] = r.q_r_ref;
    row["diagnostics"] = diag;
    arr.push_back(row);
  }
  ojson out = ojson::object();
  out["schema"] = "uvnlos.run/1";
  out["scenario"] = s.name;
  out["results"] = arr;
  return out;
}

void print_table(std::ostream& os, const std::vector<PathLossResult>& results) {
  fmt::print(os, "{:<12} {:>12} {:>12} {:>14} {:>14}  {}\n", "model", "PL [dB]", "+- [dB]", "Q_r,sca [J]",
             "Q_r,ref [J]", "status");
  for (const auto& r : results) {
    fmt::print(os, "{:<12} {:>12.2f} {:>12.2f} {:>14.6e} {:>14.6e}  {}\n", r.model, r.pathloss_db,
               r.error_estimate_db, r.q_r_sca, r.q_r_ref, to_string(r.status));
  }
}

SweepTable run_sweep(const Scenario& base, const SweepSpec& spec) {
  SweepTable t{spec, {}};
  const double scale = spec.unit == "deg" ? geometry::kPi / 180.0 : 1.0;
  for (double v : spec.values) {
    SweepRow row;
    row.value = v;
    Scenario s = base;
    s.sweep.reset();
    try {
      set_variable(s, spec.var, v * scale);
      row.results = run_models(s, spec.models);
      for (size_t i = 0; i < row.results.size(); ++i) {
        if (row.results[i].status != Status::empty_overlap) continue;
        if (!row.error.empty()) row.error += "; ";
        row.error += to_string(spec.models[i]) + ": " + to_string(row.results[i].status);
      }
    } catch (const DomainError& e) {
      row.results.clear();
      row.error = e.what();
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<std::string> csv_header(const SweepSpec& spec) {
  std::vector<std::string> h{spec.unit.empty() ? spec.var : spec.var + "_" + spec.unit};
  for (Model m : spec.models) h.push_back(to_string(m) + "_db");
  const bool has_mc = std::find(spec.models.begin(), spec.models.end(), Model::mcpt) != spec.models.end();
  const bool has_total = std::find(spec.models.begin(), spec.models.end(), Model::total) != spec.models.end();
  if (has_mc) h.push_back("mcpt_stderr_db");
  if (has_total) h.push_back("ref_over_sca");
  h.push_back("error");
  return h;
}

namespace {

std::string csv_number(double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : "inf"; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const SweepTable& t) {
  const auto header = csv_header(t.spec);
  fmt::print(os, "# schema={}\n", kSweepSchema);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  const bool has_mc = std::find(t.spec.models.begin(), t.spec.models.end(), Model::mcpt) != t.spec.models.end();
  const bool has_total = std::find(t.spec.models.begin(), t.spec.models.end(), Model::total) != t.spec.models.end();
  for (const auto& row : t.rows) {
    std::vector<std::string> cells{fmt::format("{:.6g}", row.value)};
    double stderr_db = NAN;
    double ratio = NAN;
    for (size_t i = 0; i < t.spec.models.size(); ++i) {
      if (i >= row.results.size()) {
        cells.emplace_back();
        continue;
      }
      const auto& r = row.results[i];
      cells.push_back(csv_number(r.pathloss_db));
      if (t.spec.models[i] == Model::mcpt) stderr_db = r.error_estimate_db;
      if (t.spec.models[i] == Model::total) {
        auto it = r.diagnostics.find("ref_over_sca");
        if (it != r.diagnostics.end()) ratio = it->second;
      }
    }
    auto opt = [](double v) { return std::isnan(v) ? std::string() : fmt::format("{:.6f}", v); };
    if (has_mc) cells.push_back(opt(stderr_db));
    if (has_total) cells.push_back(opt(ratio));
    cells.push_back(csv_escape(row.error));
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }
}

CsvData read_csv(std::istream& is) {
  CsvData d;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (d.header.empty()) {
      d.header = std::move(cells);
    } else {
      d.rows.push_back(std::move(cells));
    }
  }
  if (d.header.empty()) throw IoError("CSV has no header row");
  return d;
}

namespace {

size_t column_index(const CsvData& d, const std::string& name) {
  for (const std::string& candidate : {name, name + "_db"}) {
    auto it = std::find(d.header.begin(), d.header.end(), candidate);
    if (it != d.header.end()) return static_cast<size_t>(it - d.header.begin());
  }
  throw MissingColumn(name);
}

}  // namespace

RmseResult rmse(const CsvData& data, const std::string& a, const std::string& b) {
  const size_t ia = column_index(data, a);
  const size_t ib = column_index(data, b);
  double sum = 0.0;
  int n = 0;
  for (const auto& row : data.rows) {
    if (ia >= row.size() || ib >= row.size()) continue;
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double va = std::strtod(row[ia].c_str(), &end_a);
    const double vb = std::strtod(row[ib].c_str(), &end_b);
    if (row[ia].empty() || row[ib].empty() || *end_a || *end_b) continue;
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    sum += (va - vb) * (va - vb);
    ++n;
  }
  if (n == 0) return {NAN, 0};
  return {std::sqrt(sum / n), n};
}

int exit_code_for(const std::vector<PathLossResult>& results) {
  if (results.empty()) return 0;
  const bool all_empty = std::all_of(results.begin(), results.end(),
                                     [](const PathLossResult& r) { return r.status == Status::empty_overlap; });
  return all_empty ? 3 : 0;
}

}  // namespace uvnlos::cli
