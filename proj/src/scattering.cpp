// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "uvnlos/detail/parallel.hpp"
#include "uvnlos/detail/search.hpp"
#include "uvnlos/error.hpp"

namespace uvnlos::scattering {

using geometry::Cuboid;
using geometry::Interval;
using geometry::Link;
using geometry::ScatterPoint;

namespace {
constexpr double kPi = geometry::kPi;
}

void validate(const ScatterIntegralConfig& c) {
  if (c.n_theta < 1) throw DomainError("n_theta", "must be at least 1");
  if (c.n_varpi < 1) throw DomainError("n_varpi", "must be at least 1");
  if (c.n_tau < 1) throw DomainError("n_tau", "must be at least 1");
  if (!(c.tau_truncation_factor > 1.0)) throw DomainError("tau_truncation_factor", "must exceed 1");
}

double kernel(const Link& link, const atmosphere::Atmosphere& atm, const ScatterPoint& p, double q_t) {
  const auto ext = atmosphere::extinction(atm);
  const double ks = atmosphere::per_metre(ext.ks);
  const double ke = atmosphere::per_metre(ext.ke);
  const Vec3 to_r = link.receiver - p.cartesian;
  const double eps = norm(to_r);
  const Vec3 u = to_r / eps;
  const double cos_v = -dot(u, link.rx_axis());
  const double mu = dot(p.cartesian, u) / p.tau;
  const double phase = atmosphere::phase_function(atm, mu);
  return q_t * cos_v * phase * std::exp(-ke * (p.tau + eps)) * link.aperture_area * ks * std::cos(p.varpi) /
         (2.0 * kPi * (1.0 - std::cos(link.beta_t)) * eps * eps);
}

int weighting_factor(const Link& link, const Cuboid* box, const Vec3& p) {
  if (p.z < 0.0) return 0;
  if (!link.rx_cone().contains(p)) return 0;
  if (box != nullptr) {
    if (geometry::segment_occluded({}, p, *box)) return 0;
    if (geometry::segment_occluded(p, link.receiver, *box)) return 0;
  }
  return 1;
}

int weighting_factor(const geometry::TransceiverGeometry& g, const geometry::Obstacle* o, const ScatterPoint& p) {
  const Link link = Link::from(g);
  if (o == nullptr) return weighting_factor(link, nullptr, p.cartesian);
  const Cuboid box = Cuboid::from(*o);
  return weighting_factor(link, &box, p.cartesian);
}

namespace {

double margin(const Link& link, double vartheta, double varpi) {
  return geometry::ray_cone_margin(link.beam_direction(vartheta, varpi), link.rx_cone());
}

struct Peak {
  double varpi{0.0};
  double value{-2.0};
};

Peak varpi_peak(const Link& link, double vartheta) {
  const double wmax = geometry::varpi_max(link.beta_t, std::clamp(vartheta, -link.beta_t, link.beta_t));
  if (wmax == 0.0) return {0.0, margin(link, vartheta, 0.0)};
  auto [x, f] = detail::golden_max([&](double w) { return margin(link, vartheta, w); }, -wmax, wmax);
  return {x, f};
}

}  // namespace

Interval varpi_hit_range(const Link& link, double vartheta) {
  const double wmax = geometry::varpi_max(link.beta_t, std::clamp(vartheta, -link.beta_t, link.beta_t));
  const Peak pk = varpi_peak(link, vartheta);
  if (!(pk.value > 0.0)) return {};
  auto hit = [&](double w) { return margin(link, vartheta, w) > 0.0; };
  const double lo = hit(-wmax) ? -wmax : detail::bisect_edge(hit, pk.varpi, -wmax);
  const double hi = hit(wmax) ? wmax : detail::bisect_edge(hit, pk.varpi, wmax);
  return {lo, hi};
}

Interval vartheta_hit_range(const Link& link) {
  const double b = link.beta_t;
  auto best = [&](double t) { return varpi_peak(link, t).value; };
  auto [t0, f0] = detail::golden_max(best, -b, b);
  if (!(f0 > 0.0)) return {};
  auto hit = [&](double t) { return best(t) > 0.0; };
  const double lo = hit(-b) ? -b : detail::bisect_edge(hit, t0, -b);
  const double hi = hit(b) ? b : detail::bisect_edge(hit, t0, b);
  return {lo, hi};
}

Interval tau_range(const Link& link, const Vec3& direction, double truncation_factor) {
  Interval iv = geometry::line_cone_interval({}, direction, link.rx_cone(), 0.0, geometry::kInf);
  if (iv.empty() || !(iv.hi > iv.lo)) return {};
  if (std::isinf(iv.hi)) iv.hi = truncation_factor * (iv.lo > 0.0 ? iv.lo : link.range());
  return iv;
}

namespace {

double integrate_once(const Link& link, const Cuboid* box, const atmosphere::Atmosphere& atm, double q_t,
                      const ScatterIntegralConfig& c, const Interval& theta_range) {
  const QuadratureRule rt = interval_rule(c.quadrature, c.n_theta, theta_range.lo, theta_range.hi, true);
  const auto rows = detail::parallel_map<double>(c.n_theta, c.threads, [&](int i) {
    const double vartheta = rt.nodes[i];
    const Interval wr = varpi_hit_range(link, vartheta);
    if (wr.empty() || !(wr.hi > wr.lo)) return 0.0;
    const QuadratureRule rw = interval_rule(c.quadrature, c.n_varpi, wr.lo, wr.hi, true);
    double row = 0.0;
    for (int j = 0; j < c.n_varpi; ++j) {
      const double varpi = rw.nodes[j];
      const Vec3 d = link.beam_direction(vartheta, varpi);
      const Interval tr = tau_range(link, d, c.tau_truncation_factor);
      if (tr.empty()) continue;
      const QuadratureRule rk = interval_rule(c.quadrature, c.n_tau, tr.lo, tr.hi, false);
      double col = 0.0;
      for (int k = 0; k < c.n_tau; ++k) {
        const double tau = rk.nodes[k];
        const ScatterPoint p{tau, varpi, vartheta, d * tau};
        if (weighting_factor(link, box, p.cartesian) == 0) continue;
        col += rk.weights[k] * kernel(link, atm, p, q_t);
      }
      row += rw.weights[j] * col;
    }
    return rt.weights[i] * row;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace

PathLossResult integrate_scattering(const Link& link, const Cuboid* box, const atmosphere::Atmosphere& atm,
                                    double q_t, const ScatterIntegralConfig& config) {
  validate(config);
  atmosphere::validate(atm);
  if (!(q_t > 0.0)) throw DomainError("q_t", "source energy must be positive");
  PathLossResult out;
  out.model = box != nullptr ? "obstacle" : "exact";
  out.q_t = q_t;
  out.diagnostics["n_theta"] = config.n_theta;
  out.diagnostics["n_varpi"] = config.n_varpi;
  out.diagnostics["n_tau"] = config.n_tau;
  const Interval theta_range = vartheta_hit_range(link);
  if (theta_range.empty() || !(theta_range.hi > theta_range.lo)) {
    out.status = Status::empty_overlap;
    return out;
  }
  out.diagnostics["vartheta_lo"] = theta_range.lo;
  out.diagnostics["vartheta_hi"] = theta_range.hi;
  const double q = integrate_once(link, box, atm, q_t, config, theta_range);
  out.q_r_sca = q;
  out.q_r = q;
  out.pathloss_db = pathloss_db(q_t, q);
  if (!(q > 0.0)) out.status = Status::zero_contribution;
  if (config.error_estimate && q > 0.0) {
    ScatterIntegralConfig half = config;
    half.n_theta = std::max(1, config.n_theta / 2);
    half.n_varpi = std::max(1, config.n_varpi / 2);
    half.n_tau = std::max(1, config.n_tau / 2);
    const double qh = integrate_once(link, box, atm, q_t, half, theta_range);
    out.error_estimate_db = std::abs(pathloss_db(q_t, qh) - out.pathloss_db) / 3.0;
    out.diagnostics["half_resolution_db"] = pathloss_db(q_t, qh);
  }
  return out;
}

PathLossResult integrate_scattering(const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                                    const atmosphere::Atmosphere& atm, double q_t,
                                    const ScatterIntegralConfig& config) {
  geometry::validate(g, geometry::ElevationBounds::relaxed);
  const Link link = Link::from(g);
  if (o == nullptr) return integrate_scattering(link, nullptr, atm, q_t, config);
  const Cuboid box = Cuboid::from(*o);
  return integrate_scattering(link, &box, atm, q_t, config);
}

}  // namespace uvnlos::scattering
