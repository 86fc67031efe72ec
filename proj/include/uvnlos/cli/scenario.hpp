// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uvnlos/atmosphere.hpp"
#include "uvnlos/geometry.hpp"
#include "uvnlos/mcpt.hpp"
#include "uvnlos/reflection.hpp"
#include "uvnlos/scattering.hpp"
#include "uvnlos/simplified.hpp"

namespace uvnlos::cli {

inline constexpr const char* kScenarioSchema = "uvnlos.scenario/1";

/// Length given in metres or as a multiple of the T-R range.
struct LengthValue {
  double value{0.0};
  bool per_range{false};

  double resolve(double range_r) const { return per_range ? value * range_r : value; }
  bool operator==(const LengthValue&) const = default;
};

struct ObstacleSpec {
  LengthValue width_w;
  LengthValue thickness_s;
  LengthValue height_kappa;
  LengthValue y_o;
  std::optional<LengthValue> x_o;
  std::optional<LengthValue> x_o_below_max;  ///< x_o = x_o,max - value
  double alpha{0.0};
  bool strict_span{true};

  geometry::Obstacle build(double range_r) const;
  bool operator==(const ObstacleSpec&) const = default;
};

enum class Model { exact, obstacle, reflection, total, simplified, mcpt };

std::string to_string(Model m);
/// Accepts canonical names and the aliases exact+obstacle, exact+obstacle+reflection.
Model parse_model(const std::string& name);
std::vector<Model> parse_models(const std::string& list);

struct SweepSpec {
  std::string var;
  std::vector<double> values;  ///< in the units of `unit`
  std::string unit;            ///< "rad", "deg" or "" for non-angles
  std::vector<Model> models;
  bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
  std::string name;
  double source_energy_j{1.0};
  geometry::TransceiverGeometry geometry{};
  geometry::ElevationBounds elevation_bounds{geometry::ElevationBounds::strict};
  atmosphere::Atmosphere atmosphere{};
  reflection::ReflectionParams reflection{};
  std::optional<ObstacleSpec> obstacle;
  scattering::ScatterIntegralConfig scatter{};
  reflection::ReflectionGridConfig grid{};
  double simplified_beta_ratio{0.02};  ///< beta / beta_t
  simplified::SimplifiedConfig simplified{};
  mcpt::McptConfig mcpt{};
  std::optional<SweepSpec> sweep;

  bool operator==(const Scenario&) const = default;
};

/// Field-path DomainError on malformed input, unknown keys or violated invariants.
Scenario parse_scenario(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// Validates every invariant the models rely on (fields named by JSON path).
void validate(const Scenario& s);

/// Obstacle resolved at the scenario's range, or nullopt.
std::optional<geometry::Obstacle> build_obstacle(const Scenario& s);

/// Parses "a,b,c" or "start:stop:step" with an optional trailing "deg".
std::vector<double> parse_values(const std::string& text, std::string& unit);

/// Sets a sweepable variable; angles are given in radians.
void set_variable(Scenario& s, const std::string& var, double value);
bool is_angle_variable(const std::string& var);
std::vector<std::string> sweep_variables();

}  // namespace uvnlos::cli
