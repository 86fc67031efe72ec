// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "uvnlos/error.hpp"

namespace uvnlos::cli {

using nlohmann::json;

namespace {

constexpr double kDeg = geometry::kPi / 180.0;

// Object view that records which keys were read so leftovers can be rejected.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw DomainError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  Node child(const std::string& key) {
    if (!has(key)) throw DomainError(field(key), "is required");
    seen_.insert(key);
    return Node(j_.at(key), field(key));
  }

  std::optional<Node> optional_child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return child(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    if (!has(key)) throw DomainError(field(key), "is required");
    const json& v = raw(key);
    if (!v.is_number()) throw DomainError(field(key), "must be a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw DomainError(field(key), "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  int integer_or(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw DomainError(field(key), "must be an integer");
    return v.get<int>();
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw DomainError(field(key), "must be a boolean");
    return v.get<bool>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw DomainError(field(key), "must be a string");
    return v.get<std::string>();
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (auto it = j_.begin(); it != j_.end(); ++it) out.push_back(it.key());
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw DomainError(field(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Reads angle keys from "angles_rad" and "angles_deg"; each key at most once.
std::map<std::string, double> read_angles(Node& parent, const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  for (const char* group : {"angles_rad", "angles_deg"}) {
    auto g = parent.optional_child(group);
    if (!g) continue;
    const double scale = std::string(group) == "angles_deg" ? kDeg : 1.0;
    for (const std::string& k : g->keys()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) continue;
      if (out.count(k)) throw DomainError(g->field(k), "angle given in both radians and degrees");
      out[k] = g->number(k) * scale;
    }
    g->finish();
  }
  return out;
}

double take(const std::map<std::string, double>& m, const std::string& key, const std::string& path) {
  auto it = m.find(key);
  if (it == m.end()) throw DomainError(path + ".angles_rad." + key, "is required");
  return it->second;
}

geometry::ElevationBounds parse_bounds(const std::string& v, const std::string& field) {
  if (v == "strict") return geometry::ElevationBounds::strict;
  if (v == "relaxed") return geometry::ElevationBounds::relaxed;
  throw DomainError(field, "must be \"strict\" or \"relaxed\"");
}

QuadratureKind parse_quadrature(const std::string& v, const std::string& field) {
  if (v == "gauss") return QuadratureKind::gauss;
  if (v == "midpoint") return QuadratureKind::midpoint;
  throw DomainError(field, "must be \"gauss\" or \"midpoint\"");
}

std::string quadrature_name(QuadratureKind k) { return k == QuadratureKind::gauss ? "gauss" : "midpoint"; }

ObstacleSpec parse_obstacle(Node& n) {
  ObstacleSpec o;
  const auto angles = read_angles(n, {"alpha"});
  o.alpha = angles.count("alpha") ? angles.at("alpha") : 0.0;
  std::map<std::string, LengthValue> lengths;
  for (const char* group : {"lengths_m", "lengths_per_range"}) {
    auto g = n.optional_child(group);
    if (!g) continue;
    const bool per_range = std::string(group) == "lengths_per_range";
    for (const std::string& k : g->keys()) {
      static const std::set<std::string> allowed{"width_w", "thickness_s", "height_kappa", "x_o", "x_o_below_max", "y_o"};
      if (!allowed.count(k)) continue;
      if (lengths.count(k)) throw DomainError(g->field(k), "length given in both lengths_m and lengths_per_range");
      lengths[k] = {g->number(k), per_range};
    }
    g->finish();
  }
  auto need = [&](const std::string& k) {
    auto it = lengths.find(k);
    if (it == lengths.end()) throw DomainError(n.field("lengths_m." + k), "is required");
    return it->second;
  };
  o.width_w = need("width_w");
  o.thickness_s = need("thickness_s");
  o.height_kappa = need("height_kappa");
  o.y_o = need("y_o");
  if (lengths.count("x_o")) o.x_o = lengths.at("x_o");
  if (lengths.count("x_o_below_max")) o.x_o_below_max = lengths.at("x_o_below_max");
  if (o.x_o.has_value() == o.x_o_below_max.has_value())
    throw DomainError(n.field("lengths_m.x_o"), "exactly one of x_o and x_o_below_max is required");
  o.strict_span = parse_bounds(n.string_or("span_bounds", "strict"), n.field("span_bounds")) ==
                  geometry::ElevationBounds::strict;
  n.finish();
  return o;
}

json length_json(const ObstacleSpec& o) {
  json m = json::object();
  json p = json::object();
  auto put = [&](const char* key, const LengthValue& v) { (v.per_range ? p : m)[key] = v.value; };
  put("width_w", o.width_w);
  put("thickness_s", o.thickness_s);
  put("height_kappa", o.height_kappa);
  put("y_o", o.y_o);
  if (o.x_o) put("x_o", *o.x_o);
  if (o.x_o_below_max) put("x_o_below_max", *o.x_o_below_max);
  json out = json::object();
  if (!m.empty()) out["lengths_m"] = m;
  if (!p.empty()) out["lengths_per_range"] = p;
  return out;
}

SweepSpec parse_sweep(Node& n) {
  SweepSpec s;
  s.var = n.string_or("var", "");
  if (s.var.empty()) throw DomainError(n.field("var"), "is required");
  const auto vars = sweep_variables();
  if (std::find(vars.begin(), vars.end(), s.var) == vars.end()) throw DomainError(n.field("var"), "unknown sweep variable");
  if (!n.has("values")) throw DomainError(n.field("values"), "is required");
  const json& v = n.raw("values");
  if (v.is_string()) {
    s.values = parse_values(v.get<std::string>(), s.unit);
  } else if (v.is_array()) {
    for (const json& x : v) {
      if (!x.is_number()) throw DomainError(n.field("values"), "must contain numbers");
      s.values.push_back(x.get<double>());
    }
    s.unit = n.string_or("unit", "");
  } else {
    throw DomainError(n.field("values"), "must be a list or a range string");
  }
  if (n.has("unit") && v.is_string()) n.string_or("unit", "");
  if (!s.unit.empty() && s.unit != "deg" && s.unit != "rad") throw DomainError(n.field("unit"), "must be deg or rad");
  if (s.unit == "deg" && !is_angle_variable(s.var)) throw DomainError(n.field("unit"), "deg applies to angle variables only");
  if (is_angle_variable(s.var) && s.unit.empty()) s.unit = "rad";
  if (n.has("models")) {
    const json& m = n.raw("models");
    if (!m.is_array()) throw DomainError(n.field("models"), "must be a list");
    for (const json& x : m) {
      if (!x.is_string()) throw DomainError(n.field("models"), "must contain strings");
      s.models.push_back(parse_model(x.get<std::string>()));
    }
  }
  n.finish();
  return s;
}

}  // namespace

geometry::Obstacle ObstacleSpec::build(double range_r) const {
  const double w = width_w.resolve(range_r);
  const double s = thickness_s.resolve(range_r);
  const double k = height_kappa.resolve(range_r);
  const double y = y_o.resolve(range_r);
  double x = 0.0;
  if (x_o) {
    x = x_o->resolve(range_r);
  } else {
    if (!(s > 0.0 && w > s)) return geometry::obstacle_vertices(w, s, k, 0.0, y, alpha);
    x = geometry::x_o_max(w, s, alpha) - x_o_below_max->resolve(range_r);
  }
  return geometry::obstacle_vertices(w, s, k, x, y, alpha);
}

std::string to_string(Model m) {
  switch (m) {
    case Model::exact: return "exact";
    case Model::obstacle: return "obstacle";
    case Model::reflection: return "reflection";
    case Model::total: return "total";
    case Model::simplified: return "simplified";
    case Model::mcpt: return "mcpt";
  }
  return "?";
}

Model parse_model(const std::string& name) {
  static const std::map<std::string, Model> names{
      {"exact", Model::exact},           {"obstacle", Model::obstacle},
      {"exact+obstacle", Model::obstacle}, {"reflection", Model::reflection},
      {"total", Model::total},           {"exact+obstacle+reflection", Model::total},
      {"simplified", Model::simplified}, {"mcpt", Model::mcpt}};
  auto it = names.find(name);
  if (it == names.end()) throw DomainError("models", "unknown model '" + name + "'");
  return it->second;
}

std::vector<Model> parse_models(const std::string& list) {
  std::vector<Model> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_model(item));
  }
  if (out.empty()) throw DomainError("models", "at least one model is required");
  return out;
}

Scenario parse_scenario(const json& j) {
  Node root(j, "");
  Scenario s;
  const std::string schema = root.string_or("schema", kScenarioSchema);
  if (schema != kScenarioSchema) throw DomainError("schema", "unsupported schema '" + schema + "'");
  s.name = root.string_or("name", "scenario");
  s.source_energy_j = root.number_or("source_energy_j", 1.0);

  {
    Node g = root.child("geometry");
    const auto a = read_angles(g, {"beta_t", "beta_r", "theta_t", "theta_r", "alpha_t", "alpha_r"});
    s.geometry.beta_t = take(a, "beta_t", "geometry");
    s.geometry.beta_r = take(a, "beta_r", "geometry");
    s.geometry.theta_t = take(a, "theta_t", "geometry");
    s.geometry.theta_r = take(a, "theta_r", "geometry");
    s.geometry.alpha_t = take(a, "alpha_t", "geometry");
    s.geometry.alpha_r = take(a, "alpha_r", "geometry");
    Node l = g.child("lengths_m");
    s.geometry.range_r = l.number("range_r");
    l.finish();
    s.geometry.aperture_area = g.number("aperture_area_m2");
    s.elevation_bounds = parse_bounds(g.string_or("elevation_bounds", "strict"), "geometry.elevation_bounds");
    g.finish();
  }
  {
    Node a = root.child("atmosphere");
    Node c = a.child("coefficients_per_km");
    s.atmosphere.ks_ray = c.number("ks_ray");
    s.atmosphere.ks_mie = c.number("ks_mie");
    s.atmosphere.ka = c.number("ka");
    c.finish();
    s.atmosphere.gamma = a.number("gamma");
    s.atmosphere.g = a.number("g");
    s.atmosphere.f = a.number("f");
    a.finish();
  }
  if (auto r = root.optional_child("reflection")) {
    s.reflection.r_r = r->number_or("r_r", s.reflection.r_r);
    s.reflection.m_s = r->number_or("m_s", s.reflection.m_s);
    s.reflection.eta = r->number_or("eta", s.reflection.eta);
    r->finish();
  }
  if (auto o = root.optional_child("obstacle")) s.obstacle = parse_obstacle(*o);
  if (auto n = root.optional_child("numerics")) {
    if (auto c = n->optional_child("scatter")) {
      s.scatter.n_theta = c->integer_or("n_theta", s.scatter.n_theta);
      s.scatter.n_varpi = c->integer_or("n_varpi", s.scatter.n_varpi);
      s.scatter.n_tau = c->integer_or("n_tau", s.scatter.n_tau);
      s.scatter.tau_truncation_factor = c->number_or("tau_truncation_factor", s.scatter.tau_truncation_factor);
      s.scatter.quadrature = parse_quadrature(c->string_or("quadrature", "gauss"), c->field("quadrature"));
      s.scatter.error_estimate = c->boolean_or("error_estimate", s.scatter.error_estimate);
      s.scatter.threads = c->integer_or("threads", s.scatter.threads);
      c->finish();
    }
    if (auto c = n->optional_child("reflection_grid")) {
      s.grid.n_u = c->integer_or("n_u", s.grid.n_u);
      s.grid.n_z = c->integer_or("n_z", s.grid.n_z);
      s.grid.quadrature = parse_quadrature(c->string_or("quadrature", "gauss"), c->field("quadrature"));
      s.grid.error_estimate = c->boolean_or("error_estimate", s.grid.error_estimate);
      s.grid.threads = c->integer_or("threads", s.grid.threads);
      c->finish();
    }
    if (auto c = n->optional_child("simplified")) {
      s.simplified_beta_ratio = c->number_or("beta_over_beta_t", s.simplified_beta_ratio);
      s.simplified.u = c->integer_or("u", s.simplified.u);
      s.simplified.tau_truncation_factor = c->number_or("tau_truncation_factor", s.simplified.tau_truncation_factor);
      s.simplified.threads = c->integer_or("threads", s.simplified.threads);
      c->finish();
    }
    if (auto c = n->optional_child("mcpt")) {
      s.mcpt.n_photons = c->unsigned_or("n_photons", s.mcpt.n_photons);
      s.mcpt.survival_threshold = c->number_or("survival_threshold", s.mcpt.survival_threshold);
      s.mcpt.collision_order = c->integer_or("collision_order", s.mcpt.collision_order);
      s.mcpt.rng_seed = c->unsigned_or("rng_seed", s.mcpt.rng_seed);
      s.mcpt.enable_reflection = c->boolean_or("enable_reflection", s.mcpt.enable_reflection);
      s.mcpt.threads = c->integer_or("threads", s.mcpt.threads);
      c->finish();
    }
    n->finish();
  }
  if (auto w = root.optional_child("sweep")) s.sweep = parse_sweep(*w);
  root.finish();
  validate(s);
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["schema"] = kScenarioSchema;
  j["name"] = s.name;
  j["source_energy_j"] = s.source_energy_j;
  const auto& g = s.geometry;
  j["geometry"] = {{"angles_rad",
                    {{"beta_t", g.beta_t}, {"beta_r", g.beta_r}, {"theta_t", g.theta_t}, {"theta_r", g.theta_r},
                     {"alpha_t", g.alpha_t}, {"alpha_r", g.alpha_r}}},
                   {"lengths_m", {{"range_r", g.range_r}}},
                   {"aperture_area_m2", g.aperture_area},
                   {"elevation_bounds", s.elevation_bounds == geometry::ElevationBounds::strict ? "strict" : "relaxed"}};
  const auto& a = s.atmosphere;
  j["atmosphere"] = {{"coefficients_per_km", {{"ks_ray", a.ks_ray}, {"ks_mie", a.ks_mie}, {"ka", a.ka}}},
                     {"gamma", a.gamma},
                     {"g", a.g},
                     {"f", a.f}};
  j["reflection"] = {{"r_r", s.reflection.r_r}, {"m_s", s.reflection.m_s}, {"eta", s.reflection.eta}};
  if (s.obstacle) {
    json o = length_json(*s.obstacle);
    o["angles_rad"] = {{"alpha", s.obstacle->alpha}};
    o["span_bounds"] = s.obstacle->strict_span ? "strict" : "relaxed";
    j["obstacle"] = o;
  }
  j["numerics"] = {
      {"scatter",
       {{"n_theta", s.scatter.n_theta}, {"n_varpi", s.scatter.n_varpi}, {"n_tau", s.scatter.n_tau},
        {"tau_truncation_factor", s.scatter.tau_truncation_factor}, {"quadrature", quadrature_name(s.scatter.quadrature)},
        {"error_estimate", s.scatter.error_estimate}, {"threads", s.scatter.threads}}},
      {"reflection_grid",
       {{"n_u", s.grid.n_u}, {"n_z", s.grid.n_z}, {"quadrature", quadrature_name(s.grid.quadrature)},
        {"error_estimate", s.grid.error_estimate}, {"threads", s.grid.threads}}},
      {"simplified",
       {{"beta_over_beta_t", s.simplified_beta_ratio}, {"u", s.simplified.u},
        {"tau_truncation_factor", s.simplified.tau_truncation_factor}, {"threads", s.simplified.threads}}},
      {"mcpt",
       {{"n_photons", s.mcpt.n_photons}, {"survival_threshold", s.mcpt.survival_threshold},
        {"collision_order", s.mcpt.collision_order}, {"rng_seed", s.mcpt.rng_seed},
        {"enable_reflection", s.mcpt.enable_reflection}, {"threads", s.mcpt.threads}}}};
  if (s.sweep) {
    json models = json::array();
    for (Model m : s.sweep->models) models.push_back(to_string(m));
    j["sweep"] = {{"var", s.sweep->var}, {"values", s.sweep->values}, {"unit", s.sweep->unit}, {"models", models}};
  }
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

namespace {

template <class F>
void with_prefix(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw DomainError(prefix + e.field(), colon == std::string::npos ? what : what.substr(colon + 2));
  }
}

}  // namespace

void validate(const Scenario& s) {
  if (!(s.source_energy_j > 0.0)) throw DomainError("source_energy_j", "must be positive");
  with_prefix("geometry.", [&] { geometry::validate(s.geometry, s.elevation_bounds); });
  with_prefix("atmosphere.", [&] { atmosphere::validate(s.atmosphere); });
  with_prefix("reflection.", [&] { reflection::validate(s.reflection); });
  with_prefix("numerics.scatter.", [&] { scattering::validate(s.scatter); });
  with_prefix("numerics.mcpt.", [&] { mcpt::validate(s.mcpt); });
  if (s.grid.n_u < 1 || s.grid.n_z < 1) throw DomainError("numerics.reflection_grid.n_u", "must be at least 1");
  if (!(s.simplified_beta_ratio > 0.0 && s.simplified_beta_ratio <= 2.0))
    throw DomainError("numerics.simplified.beta_over_beta_t", "must lie in (0, 2]");
  if (s.simplified.u < 1) throw DomainError("numerics.simplified.u", "must be at least 1");
  if (s.obstacle) {
    with_prefix("obstacle.", [&] {
      const geometry::Obstacle o = s.obstacle->build(s.geometry.range_r);
      if (s.obstacle->strict_span) geometry::validate_span(o, s.geometry.range_r);
    });
  }
}

std::optional<geometry::Obstacle> build_obstacle(const Scenario& s) {
  if (!s.obstacle) return std::nullopt;
  return s.obstacle->build(s.geometry.range_r);
}

std::vector<double> parse_values(const std::string& text, std::string& unit) {
  std::string t = text;
  unit.clear();
  if (t.size() >= 3 && t.compare(t.size() - 3, 3, "deg") == 0) {
    unit = "deg";
    t.erase(t.size() - 3);
  }
  auto num = [&](const std::string& v) {
    try {
      size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw DomainError("values", "cannot parse '" + v + "'");
    }
  };
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw DomainError("values", "range must be start:stop:step");
    const double a = num(parts[0]), b = num(parts[1]), step = num(parts[2]);
    if (!(step > 0.0) || b < a) throw DomainError("values", "range needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + step * static_cast<double>(i));
  } else {
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ',')) out.push_back(num(p));
  }
  if (out.empty()) throw DomainError("values", "no values given");
  return out;
}

std::vector<std::string> sweep_variables() {
  return {"beta_t",        "beta_r",           "theta_t",   "theta_r",   "alpha_t",  "alpha_r",
          "range_r",       "obstacle.alpha",   "obstacle.y_o", "obstacle.x_o", "obstacle.x_o_below_max",
          "obstacle.height_kappa", "ks_ray",  "ks_mie",    "ka",        "r_r",      "m_s",
          "eta",           "simplified.beta_over_beta_t", "alpha", "x_o"};
}

bool is_angle_variable(const std::string& var) {
  static const std::set<std::string> angles{"beta_t", "beta_r", "theta_t", "theta_r", "alpha_t", "alpha_r", "obstacle.alpha", "alpha"};
  return angles.count(var) > 0;
}

void set_variable(Scenario& s, const std::string& var, double v) {
  auto obstacle = [&]() -> ObstacleSpec& {
    if (!s.obstacle) throw DomainError(var, "scenario has no obstacle");
    return *s.obstacle;
  };
  auto set_length = [&](LengthValue& l) { l.value = l.per_range ? v / s.geometry.range_r : v; };
  if (var == "beta_t") s.geometry.beta_t = v;
  else if (var == "beta_r") s.geometry.beta_r = v;
  else if (var == "theta_t") s.geometry.theta_t = v;
  else if (var == "theta_r") s.geometry.theta_r = v;
  else if (var == "alpha_t") s.geometry.alpha_t = v;
  else if (var == "alpha_r") s.geometry.alpha_r = v;
  else if (var == "range_r") s.geometry.range_r = v;
  else if (var == "obstacle.alpha" || var == "alpha") obstacle().alpha = v;
  else if (var == "obstacle.y_o") set_length(obstacle().y_o);
  else if (var == "obstacle.height_kappa") set_length(obstacle().height_kappa);
  else if (var == "obstacle.x_o" || var == "x_o") {
    ObstacleSpec& o = obstacle();
    o.x_o_below_max.reset();
    o.x_o = LengthValue{v, false};
  } else if (var == "obstacle.x_o_below_max") {
    ObstacleSpec& o = obstacle();
    o.x_o.reset();
    o.x_o_below_max = LengthValue{v, false};
  } else if (var == "ks_ray") s.atmosphere.ks_ray = v;
  else if (var == "ks_mie") s.atmosphere.ks_mie = v;
  else if (var == "ka") s.atmosphere.ka = v;
  else if (var == "r_r") s.reflection.r_r = v;
  else if (var == "m_s") s.reflection.m_s = v;
  else if (var == "eta") s.reflection.eta = v;
  else if (var == "simplified.beta_over_beta_t") s.simplified_beta_ratio = v;
  else throw DomainError("var", "unknown sweep variable '" + var + "'");
}

}  // namespace uvnlos::cli
