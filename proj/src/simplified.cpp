// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/simplified.hpp"

#include <cmath>

#include "uvnlos/detail/parallel.hpp"
#include "uvnlos/error.hpp"
#include "uvnlos/scattering.hpp"

namespace uvnlos::simplified {

using geometry::Link;

namespace {
constexpr double kPi = geometry::kPi;
}

double upsilon(int i, double beta) {
  if (i < 1) throw DomainError("i", "layer index must be at least 1");
  const double ib = i * beta;
  const double ch2 = std::cos(beta / 2.0) * std::cos(beta / 2.0);
  const double a = std::sin(2.0 * ib) * std::sin(2.0 * ib) / (std::cos(ib) * std::cos(ib) - ch2);
  const double rad = 4.0 * std::sin(ib) * std::sin(ib) - 4.0 * ch2 - a;
  if (!(rad >= 0.0) || !std::isfinite(rad))
    throw DomainError("beta", "sampling ring " + std::to_string(i) + " has no real tangent solution");
  return std::sqrt(rad) / (2.0 * std::cos(beta / 2.0));
}

SamplingPlan build_sampling_plan(const geometry::TransceiverGeometry& g, double beta) {
  if (!(beta > 0.0 && beta <= 2.0 * g.beta_t)) throw DomainError("beta", "must lie in (0, 2 beta_t]");
  SamplingPlan plan;
  plan.beta = beta;
  plan.nu = static_cast<int>(std::floor(g.beta_t / beta - 0.5));
  plan.energy_fraction = (1.0 - std::cos(beta / 2.0)) / (1.0 - std::cos(g.beta_t));
  const double ct = g.theta_t;
  for (int i = 0; i <= plan.nu; ++i) {
    int count = 1;
    double step_extra = 0.0;
    if (i > 0) {
      const double half_gap = std::atan(upsilon(i, beta));
      count = static_cast<int>(std::floor(kPi / half_gap));
      step_extra = 2.0 * half_gap;
    }
    plan.nu_i.push_back(count);
    const double beta_i = i > 0 ? 2.0 * kPi / count - step_extra : 0.0;
    for (int j = 0; j < count; ++j) {
      const double bj = j * beta_i + j * step_extra;
      const double ib = i * beta;
      const double vt = std::atan(std::tan(ib) * std::cos(bj));
      const double phi = std::atan(std::cos(vt) * std::tan(ib) * std::sin(bj) / std::cos(vt + ct));
      const double sc = std::cos(ib) / (std::cos(vt) * std::cos(phi));
      const Vec3 abc{sc * std::cos(vt + ct) * std::cos(g.alpha_t - phi),
                     sc * std::cos(vt + ct) * std::sin(g.alpha_t - phi), std::cos(ib) * std::sin(vt + ct) / std::cos(vt)};
      plan.beams.push_back({i, j, vt, phi, bj, normalized(abc)});
    }
  }
  return plan;
}

geometry::Interval subbeam_tau_limits(const Link& link, const SubBeam& b, double factor) {
  return scattering::tau_range(link, b.direction, factor);
}

PathLossResult simplified_pathloss(const geometry::TransceiverGeometry& g, const atmosphere::Atmosphere& atm,
                                   double q_t, const SimplifiedConfig& config) {
  geometry::validate(g, geometry::ElevationBounds::relaxed);
  atmosphere::validate(atm);
  if (!(q_t > 0.0)) throw DomainError("q_t", "source energy must be positive");
  if (config.u < 1) throw DomainError("u", "must be at least 1");
  const double beta = config.beta > 0.0 ? config.beta : g.beta_t / 50.0;
  const SamplingPlan plan = build_sampling_plan(g, beta);
  const Link link = Link::from(g);
  const auto ext = atmosphere::extinction(atm);
  const double ks = atmosphere::per_metre(ext.ks);
  const double ke = atmosphere::per_metre(ext.ke);
  const double q_sub = q_t * plan.energy_fraction;
  const Vec3 h = link.rx_axis();

  const int nb = static_cast<int>(plan.beams.size());
  const auto parts = detail::parallel_map<double>(nb, config.threads, [&](int k) {
    const SubBeam& b = plan.beams[k];
    const geometry::Interval iv = subbeam_tau_limits(link, b, config.tau_truncation_factor);
    if (iv.empty()) return 0.0;
    const QuadratureRule rule = interval_rule(QuadratureKind::gauss, config.u, iv.lo, iv.hi, false);
    double s = 0.0;
    for (int q = 0; q < config.u; ++q) {
      const double tau = rule.nodes[q];
      const Vec3 p = b.direction * tau;
      const Vec3 to_r = link.receiver - p;
      const double eps = norm(to_r);
      const double mu = dot(b.direction, to_r) / eps;
      const double cos_v = -dot(to_r, h) / eps;
      s += rule.weights[q] * q_sub * atmosphere::phase_function(atm, mu) * cos_v / (eps * eps) * ks *
           link.aperture_area * std::exp(-ke * (tau + eps));
    }
    return s;
  });
  double q_r = 0.0;
  for (double v : parts) q_r += v;

  PathLossResult out;
  out.model = "simplified";
  out.q_t = q_t;
  out.q_r_sca = q_r;
  out.q_r = q_r;
  const double emitted = q_sub * nb;
  out.pathloss_db = pathloss_db(emitted, q_r);
  out.status = q_r > 0.0 ? Status::ok : Status::empty_overlap;
  out.diagnostics["beta"] = beta;
  out.diagnostics["subbeams"] = nb;
  out.diagnostics["layers"] = plan.nu + 1;
  out.diagnostics["emitted_fraction"] = plan.total_fraction();
  out.diagnostics["pathloss_q_t_db"] = pathloss_db(q_t, q_r);
  return out;
}

}  // namespace uvnlos::simplified
