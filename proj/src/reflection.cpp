// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/reflection.hpp"

#include <algorithm>
#include <cmath>

#include "uvnlos/detail/parallel.hpp"
#include "uvnlos/detail/search.hpp"
#include "uvnlos/error.hpp"

namespace uvnlos::reflection {

using geometry::Cuboid;
using geometry::Interval;
using geometry::Link;

namespace {
constexpr double kPi = geometry::kPi;

ReflectionSurface make_surface(SurfaceLabel label, const Vec3& m, const Vec3& n, double height) {
  // Outward normal of the edge m -> n traversed clockwise seen from above.
  const Vec3 e = n - m;
  const Vec3 normal = normalized(Vec3{e.y, -e.x, 0.0});
  return {label, normal, true, m, n, height};
}
}  // namespace

void validate(const ReflectionParams& p) {
  if (!(p.r_r >= 0.0 && p.r_r <= 1.0)) throw DomainError("r_r", "must lie in [0, 1]");
  if (!(p.m_s >= 0.0 && std::isfinite(p.m_s))) throw DomainError("m_s", "must be non-negative");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw DomainError("eta", "must lie in [0, 1]");
}

std::string to_string(SurfaceLabel l) {
  switch (l) {
    case SurfaceLabel::cdd_c: return "CDD'C'";
    case SurfaceLabel::daa_d: return "DAA'D'";
    case SurfaceLabel::bcc_b: return "BCC'B'";
  }
  return "?";
}

std::vector<ReflectionSurface> reflection_surfaces(const Cuboid& box) {
  const Vec3 a = box.corner(0), b = box.corner(1), c = box.corner(2), d = box.corner(3);
  std::vector<ReflectionSurface> out;
  out.push_back(make_surface(SurfaceLabel::cdd_c, c, d, box.height));
  if (box.alpha < 0.0) out.push_back(make_surface(SurfaceLabel::daa_d, d, a, box.height));
  if (box.alpha > 0.0) out.push_back(make_surface(SurfaceLabel::bcc_b, b, c, box.height));
  return out;
}

std::vector<ReflectionSurface> reflection_surfaces(const geometry::Obstacle& o) {
  std::vector<ReflectionSurface> out;
  const Vec3 a = o.ground(o.a), b = o.ground(o.b), c = o.ground(o.c), d = o.ground(o.d);
  out.push_back(make_surface(SurfaceLabel::cdd_c, c, d, o.height_kappa));
  if (o.alpha < 0.0) out.push_back(make_surface(SurfaceLabel::daa_d, d, a, o.height_kappa));
  if (o.alpha > 0.0) out.push_back(make_surface(SurfaceLabel::bcc_b, b, c, o.height_kappa));
  return out;
}

double phong_intensity(const ReflectionParams& p, double cos_theta1, double cos_theta2) {
  const double diffuse = p.eta * std::max(cos_theta1, 0.0) / kPi;
  const double specular = (1.0 - p.eta) * (p.m_s + 1.0) / (2.0 * kPi) * std::pow(std::max(cos_theta2, 0.0), p.m_s);
  return diffuse + specular;
}

ReflectionAngles reflection_angles(const Link& link, const ReflectionSurface& s, const Vec3& u) {
  ReflectionAngles a;
  a.tau = norm(u);
  const Vec3 in = u / a.tau;
  const Vec3 to_r = link.receiver - u;
  a.eps = norm(to_r);
  const Vec3 e = to_r / a.eps;
  a.cos_omega_i = -dot(in, s.normal);
  a.cos_theta1 = dot(s.normal, e);
  const Vec3 mirror = in - s.normal * (2.0 * dot(in, s.normal));
  a.cos_theta2 = dot(mirror, e);
  a.cos_theta_v = -dot(e, link.rx_axis());
  return a;
}

int reflection_weight(const Link& link, const Cuboid& box, const ReflectionSurface& s, const Vec3& u) {
  if (!link.tx_cone().contains(u)) return 0;
  if (!link.rx_cone().contains(u)) return 0;
  const ReflectionAngles a = reflection_angles(link, s, u);
  if (!(a.cos_omega_i > 0.0) || !(a.cos_theta1 > 0.0)) return 0;
  if (geometry::segment_occluded({}, u, box)) return 0;
  if (geometry::segment_occluded(u, link.receiver, box)) return 0;
  return 1;
}

double reflection_density(const Link& link, const atmosphere::Atmosphere& atm, const ReflectionParams& p,
                          const ReflectionSurface& s, const Vec3& u, double q_t) {
  const double ke = atmosphere::per_metre(atmosphere::extinction(atm).ke);
  const ReflectionAngles a = reflection_angles(link, s, u);
  const double ir = phong_intensity(p, a.cos_theta1, a.cos_theta2);
  return p.r_r * link.aperture_area * q_t * ir * a.cos_theta_v * a.cos_omega_i * std::exp(-ke * (a.tau + a.eps)) /
         (2.0 * kPi * (1.0 - std::cos(link.beta_t)) * a.tau * a.tau * a.eps * a.eps);
}

namespace {

// z-range on the vertical line at u that is inside both cones and the face.
Interval z_range(const Link& link, const ReflectionSurface& s, double u) {
  const Vec3 base = s.point(u, 0.0);
  const Vec3 up{0.0, 0.0, 1.0};
  const Interval t = geometry::line_cone_interval(base, up, link.tx_cone(), 0.0, s.height);
  if (t.empty()) return {};
  const Interval r = geometry::line_cone_interval(base, up, link.rx_cone(), t.lo, t.hi);
  if (r.empty() || !(r.hi > r.lo)) return {};
  return r;
}

Interval u_range(const Link& link, const ReflectionSurface& s) {
  constexpr int kScan = 512;
  int first = -1;
  int last = -1;
  for (int i = 0; i <= kScan; ++i) {
    if (!z_range(link, s, static_cast<double>(i) / kScan).empty()) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return {};
  auto hit = [&](double u) { return !z_range(link, s, u).empty(); };
  const double lo = first == 0 ? 0.0 : detail::bisect_edge(hit, double(first) / kScan, double(first - 1) / kScan);
  const double hi =
      last == kScan ? 1.0 : detail::bisect_edge(hit, double(last) / kScan, double(last + 1) / kScan);
  return {lo, hi};
}

double integrate_surface(const Link& link, const Cuboid& box, const atmosphere::Atmosphere& atm,
                         const ReflectionParams& p, const ReflectionSurface& s, double q_t,
                         const ReflectionGridConfig& c) {
  if (s.height <= 0.0) return 0.0;
  const Interval ur = u_range(link, s);
  if (ur.empty() || !(ur.hi > ur.lo)) return 0.0;
  const QuadratureRule ru = interval_rule(c.quadrature, c.n_u, ur.lo, ur.hi, true);
  const auto cols = detail::parallel_map<double>(c.n_u, c.threads, [&](int i) {
    const double u = ru.nodes[i];
    const Interval zr = z_range(link, s, u);
    if (zr.empty()) return 0.0;
    const QuadratureRule rz = interval_rule(c.quadrature, c.n_z, zr.lo, zr.hi, true);
    double col = 0.0;
    for (int k = 0; k < c.n_z; ++k) {
      const Vec3 pt = s.point(u, rz.nodes[k]);
      if (reflection_weight(link, box, s, pt) == 0) continue;
      col += rz.weights[k] * reflection_density(link, atm, p, s, pt, q_t);
    }
    return ru.weights[i] * col;
  });
  double total = 0.0;
  for (double v : cols) total += v;
  return total * s.edge_length();
}

}  // namespace

PathLossResult integrate_reflection(const Link& link, const Cuboid& box, const atmosphere::Atmosphere& atm,
                                    const ReflectionParams& p, double q_t, const ReflectionGridConfig& config) {
  validate(p);
  atmosphere::validate(atm);
  if (config.n_u < 1) throw DomainError("n_u", "must be at least 1");
  if (config.n_z < 1) throw DomainError("n_z", "must be at least 1");
  if (!(q_t > 0.0)) throw DomainError("q_t", "source energy must be positive");
  PathLossResult out;
  out.model = "reflection";
  out.q_t = q_t;
  double full = 0.0;
  double half = 0.0;
  ReflectionGridConfig hc = config;
  hc.n_u = std::max(1, config.n_u / 2);
  hc.n_z = std::max(1, config.n_z / 2);
  for (const ReflectionSurface& s : reflection_surfaces(box)) {
    const double q = integrate_surface(link, box, atm, p, s, q_t, config);
    out.diagnostics["q_r_" + to_string(s.label)] = q;
    full += q;
    if (config.error_estimate) half += integrate_surface(link, box, atm, p, s, q_t, hc);
  }
  out.q_r_ref = full;
  out.q_r = full;
  out.pathloss_db = pathloss_db(q_t, full);
  if (!(full > 0.0)) out.status = Status::zero_contribution;
  if (config.error_estimate && full > 0.0 && half > 0.0)
    out.error_estimate_db = std::abs(pathloss_db(q_t, half) - out.pathloss_db) / 3.0;
  return out;
}

PathLossResult integrate_reflection(const geometry::TransceiverGeometry& g, const geometry::Obstacle& o,
                                    const atmosphere::Atmosphere& atm, const ReflectionParams& p, double q_t,
                                    const ReflectionGridConfig& config) {
  geometry::validate(g, geometry::ElevationBounds::relaxed);
  return integrate_reflection(Link::from(g), Cuboid::from(o), atm, p, q_t, config);
}

PathLossResult total_pathloss(const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                              const atmosphere::Atmosphere& atm, const ReflectionParams& p, double q_t,
                              const scattering::ScatterIntegralConfig& scatter, const ReflectionGridConfig& grid) {
  PathLossResult sca = scattering::integrate_scattering(g, o, atm, q_t, scatter);
  PathLossResult out = sca;
  out.model = "total";
  if (o != nullptr) {
    const PathLossResult ref = integrate_reflection(g, *o, atm, p, q_t, grid);
    out.q_r_ref = ref.q_r_ref;
    for (const auto& [k, v] : ref.diagnostics) out.diagnostics[k] = v;
    out.diagnostics["scattering_db"] = sca.pathloss_db;
    out.diagnostics["reflection_db"] = ref.pathloss_db;
    if (sca.q_r_sca > 0.0) out.diagnostics["ref_over_sca"] = ref.q_r_ref / sca.q_r_sca;
    out.error_estimate_db = std::hypot(sca.error_estimate_db, ref.error_estimate_db);
  }
  out.q_r = out.q_r_sca + out.q_r_ref;
  out.pathloss_db = pathloss_db(q_t, out.q_r);
  out.status = out.q_r > 0.0 ? Status::ok : sca.status;
  if (sca.status == Status::empty_overlap && out.q_r_ref == 0.0) out.status = Status::empty_overlap;
  return out;
}

}  // namespace uvnlos::reflection
