// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "uvnlos/error.hpp"

namespace uvnlos::geometry {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw DomainError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

// Unit normal of the plane through the horizontal line perpendicular to
// azimuth `azim` and tilted to elevation `elev`.
Vec3 tilted_plane_normal(double elev, double azim) {
  return {-std::cos(azim) * std::sin(elev), -std::sin(azim) * std::sin(elev), std::cos(elev)};
}

Vec3 top_vertex(const Obstacle& o, Edge e, bool second) {
  switch (e) {
    case Edge::ab: return second ? o.top[1] : o.top[0];
    case Edge::bc: return second ? o.top[2] : o.top[1];
    case Edge::cd: return second ? o.top[3] : o.top[2];
    case Edge::da: return second ? o.top[0] : o.top[3];
    default: return {};
  }
}

int vertical_vertex(Edge e) {
  switch (e) {
    case Edge::aa: return 0;
    case Edge::bb: return 1;
    case Edge::cc: return 2;
    case Edge::dd: return 3;
    default: return -1;
  }
}

// Intersection of the plane n.(p - apex) = 0 with an obstacle edge.
Vec3 plane_edge_point(const Obstacle& o, const Vec3& n, const Vec3& apex, Edge e) {
  const double kappa = o.height_kappa;
  const double tol = 1e-9 * std::max(1.0, kappa);
  const int v = vertical_vertex(e);
  if (v >= 0) {
    const Vec3 base = o.ground(static_cast<Obstacle::Vertex>(v));
    if (std::abs(n.z) < 1e-300) throw NoIntersection(to_string(e));
    const double z = -(n.x * (base.x - apex.x) + n.y * (base.y - apex.y)) / n.z;
    if (!(z >= -tol && z <= kappa + tol)) throw NoIntersection(to_string(e));
    return {base.x, base.y, std::clamp(z, 0.0, kappa)};
  }
  const Vec3 m = top_vertex(o, e, false);
  const Vec3 nn = top_vertex(o, e, true);
  const Vec3 dir = nn - m;
  const double den = dot(n, dir);
  if (std::abs(den) < 1e-300) throw NoIntersection(to_string(e));
  const double t = -dot(n, m - apex) / den;
  if (!(t >= -1e-9 && t <= 1.0 + 1e-9)) throw NoIntersection(to_string(e));
  return m + dir * std::clamp(t, 0.0, 1.0);
}

// Angle between (p - apex) and the plane's trace in x = 0, oriented by `toward`.
double in_plane_angle(const Vec3& n, const Vec3& apex, const Vec3& p, double toward) {
  const Vec3 trace = Vec3{0.0, n.z, -n.y} * toward;
  const Vec3 v = p - apex;
  const double c = dot(v, trace) / (norm(trace) * norm(v));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

bool approx_eq(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }
bool greater(double a, double b) { return a > b && !approx_eq(a, b); }
bool greater_eq(double a, double b) { return a > b || approx_eq(a, b); }

}  // namespace

void validate(const TransceiverGeometry& g, ElevationBounds bounds) {
  const double half_pi = kPi / 2.0;
  require(finite(g.beta_t) && g.beta_t > 0.0 && g.beta_t < half_pi, "beta_t", "must lie in (0, pi/2)");
  require(finite(g.beta_r) && g.beta_r > 0.0 && g.beta_r < half_pi, "beta_r", "must lie in (0, pi/2)");
  require(finite(g.theta_t) && g.theta_t > 0.0 && g.theta_t < half_pi, "theta_t", "must lie in (0, pi/2)");
  require(finite(g.theta_r) && g.theta_r > 0.0 && g.theta_r < half_pi, "theta_r", "must lie in (0, pi/2)");
  require(finite(g.alpha_t) && g.alpha_t >= half_pi && g.alpha_t < kPi, "alpha_t", "must lie in [pi/2, pi)");
  require(finite(g.alpha_r) && g.alpha_r > -kPi && g.alpha_r <= -half_pi, "alpha_r", "must lie in (-pi, -pi/2]");
  require(finite(g.range_r) && g.range_r > 0.0, "range_r", "must be positive");
  require(finite(g.aperture_area) && g.aperture_area > 0.0, "aperture_area", "must be positive");
  if (bounds == ElevationBounds::strict) {
    require(g.delta_t_low() > 0.0, "delta_t_low", "theta_t - beta_t must be positive");
    require(g.delta_t_high() < half_pi, "delta_t_high", "theta_t + beta_t must be below pi/2");
    require(g.delta_r_low() > 0.0, "delta_r_low", "theta_r - beta_r must be positive");
    require(g.delta_r_high() < half_pi, "delta_r_high", "theta_r + beta_r must be below pi/2");
  }
}

double threshold_angle(double width_w, double thickness_s) { return std::atan(thickness_s / width_w); }

double half_diagonal(double width_w, double thickness_s) { return std::hypot(width_w, thickness_s) / 2.0; }

double x_o_max(double width_w, double thickness_s, double alpha) {
  return -half_diagonal(width_w, thickness_s) *
         std::sin(threshold_angle(width_w, thickness_s) + std::abs(alpha));
}

double y_o_min(double width_w, double thickness_s, double alpha) {
  return half_diagonal(width_w, thickness_s) *
         std::sin(kPi / 2.0 - threshold_angle(width_w, thickness_s) + std::abs(alpha));
}

Obstacle obstacle_vertices(double width_w, double thickness_s, double height_kappa, double x_o,
                           double y_o, double alpha) {
  require(finite(thickness_s) && thickness_s > 0.0, "thickness_s", "must be positive");
  require(finite(width_w) && width_w > thickness_s, "width_w", "must exceed thickness_s");
  require(finite(height_kappa) && height_kappa >= 0.0, "height_kappa", "must be non-negative");
  require(finite(x_o) && finite(y_o), "x_o", "must be finite");
  const double th = threshold_angle(width_w, thickness_s);
  require(finite(alpha) && std::abs(alpha) <= th * (1.0 + 1e-12), "alpha", "|alpha| must not exceed atan(s/w)");
  require(x_o < x_o_max(width_w, thickness_s, alpha), "x_o", "must be below x_o,max");

  const double rws = half_diagonal(width_w, thickness_s);
  const double k = height_kappa;
  Obstacle o{width_w, thickness_s, height_kappa, x_o, y_o, alpha, {}};
  o.top[0] = {-rws * std::sin(alpha + th) + x_o, rws * std::cos(alpha + th) + y_o, k};
  o.top[1] = {-rws * std::sin(-alpha + th) + x_o, -rws * std::cos(-alpha + th) + y_o, k};
  o.top[2] = {rws * std::sin(alpha + th) + x_o, -rws * std::cos(alpha + th) + y_o, k};
  o.top[3] = {rws * std::sin(-alpha + th) + x_o, rws * std::cos(-alpha + th) + y_o, k};
  return o;
}

void validate_span(const Obstacle& o, double range_r) {
  const double ymin = y_o_min(o.width_w, o.thickness_s, o.alpha);
  require(o.y_o > ymin && o.y_o < range_r - ymin, "y_o", "must lie in (y_o,min, r - y_o,min)");
}

// ---------------------------------------------------------------------------

Cuboid Cuboid::from(const Obstacle& o) {
  return {{o.x_o, o.y_o, 0.0}, o.thickness_s / 2.0, o.width_w / 2.0, o.height_kappa,
          o.alpha, o.alpha, std::cos(o.alpha), std::sin(o.alpha)};
}

Cuboid Cuboid::rotated_about_z(double angle) const {
  Cuboid c = *this;
  c.center = rotate_z(center, angle);
  c.yaw = yaw + angle;
  c.cos_yaw = std::cos(c.yaw);
  c.sin_yaw = std::sin(c.yaw);
  return c;
}

Vec3 Cuboid::to_local(const Vec3& p) const {
  const Vec3 v = p - center;
  return {cos_yaw * v.x + sin_yaw * v.y, -sin_yaw * v.x + cos_yaw * v.y, v.z};
}

Vec3 Cuboid::to_world(const Vec3& l) const {
  return Vec3{cos_yaw * l.x - sin_yaw * l.y, sin_yaw * l.x + cos_yaw * l.y, l.z} + center;
}

Vec3 Cuboid::corner(int v) const {
  static constexpr double sx[4] = {-1.0, -1.0, 1.0, 1.0};
  static constexpr double sy[4] = {1.0, -1.0, -1.0, 1.0};
  return to_world({sx[v] * half_s, sy[v] * half_w, 0.0});
}

bool Cuboid::contains(const Vec3& p) const {
  const Vec3 l = to_local(p);
  return std::abs(l.x) <= half_s && std::abs(l.y) <= half_w && l.z >= 0.0 && l.z <= height;
}

namespace {

struct SlabResult {
  double tnear{-kInf};
  double tfar{kInf};
  int axis{-1};
  double sign{0.0};
};

// Slab test in box-local coordinates; returns false when the line misses.
bool slab(const Vec3& o, const Vec3& d, const Cuboid& box, SlabResult& out) {
  const Vec3 lo = box.to_local(o);
  const Vec3 ld{box.cos_yaw * d.x + box.sin_yaw * d.y, -box.sin_yaw * d.x + box.cos_yaw * d.y, d.z};
  const double mins[3] = {-box.half_s, -box.half_w, 0.0};
  const double maxs[3] = {box.half_s, box.half_w, box.height};
  const double os[3] = {lo.x, lo.y, lo.z};
  const double ds[3] = {ld.x, ld.y, ld.z};
  for (int i = 0; i < 3; ++i) {
    if (ds[i] == 0.0) {
      if (os[i] < mins[i] || os[i] > maxs[i]) return false;
      continue;
    }
    double t0 = (mins[i] - os[i]) / ds[i];
    double t1 = (maxs[i] - os[i]) / ds[i];
    double s = -1.0;
    if (t0 > t1) {
      std::swap(t0, t1);
      s = 1.0;
    }
    if (t0 > out.tnear) {
      out.tnear = t0;
      out.axis = i;
      out.sign = s;
    }
    out.tfar = std::min(out.tfar, t1);
  }
  return out.tnear <= out.tfar;
}

}  // namespace

BoxHit ray_box_entry(const Vec3& o, const Vec3& d, const Cuboid& box, double t_min) {
  if (box.height <= 0.0) return {};
  SlabResult s;
  if (!slab(o, d, box, s)) return {};
  if (s.tnear <= t_min || s.axis < 0) return {};
  BoxFace face = BoxFace::none;
  if (s.axis == 0) face = s.sign > 0 ? BoxFace::front_cd : BoxFace::back_ab;
  if (s.axis == 1) face = s.sign > 0 ? BoxFace::side_da : BoxFace::side_bc;
  if (s.axis == 2) face = s.sign > 0 ? BoxFace::top : BoxFace::none;
  return {s.tnear, face};
}

bool segment_occluded(const Vec3& p0, const Vec3& p1, const Cuboid& box) {
  if (box.height <= 0.0) return false;
  SlabResult s;
  if (!slab(p0, p1 - p0, box, s)) return false;
  const double lo = std::max(s.tnear, 0.0);
  const double hi = std::min(s.tfar, 1.0);
  return hi - lo > 1e-9;
}

bool Cone::contains(const Vec3& p, double tol) const {
  const Vec3 v = p - apex;
  const double len = norm(v);
  if (len == 0.0) return true;
  return dot(v, axis) >= (std::cos(half_angle) - tol) * len;
}

// ---------------------------------------------------------------------------

Link Link::from(const TransceiverGeometry& g) {
  return {g.beta_t, g.beta_r, g.theta_t, g.theta_r, g.alpha_t, g.alpha_r, {0.0, g.range_r, 0.0}, g.aperture_area};
}

Link Link::rotated_about_z(double angle) const {
  Link l = *this;
  l.alpha_t += angle;
  l.alpha_r += angle;
  l.receiver = rotate_z(receiver, angle);
  return l;
}

Vec3 Link::beam_direction(double vartheta, double varpi) const {
  const Vec3 f = direction_from_angles(theta_t + vartheta, alpha_t);
  const Vec3 g{-std::sin(alpha_t), std::cos(alpha_t), 0.0};
  return f * std::cos(varpi) + g * std::sin(varpi);
}

double varpi_max(double beta_t, double vartheta) {
  const double t2 = std::tan(beta_t) * std::tan(beta_t) - std::tan(vartheta) * std::tan(vartheta);
  if (t2 < 0.0) {
    if (t2 > -1e-12) return 0.0;
    throw DomainError("vartheta", "|vartheta| exceeds beta_t");
  }
  return std::atan(std::cos(vartheta) * std::sqrt(t2));
}

ScatterPoint scatter_point(const Link& link, double tau, double varpi, double vartheta) {
  return {tau, varpi, vartheta, link.beam_direction(vartheta, varpi) * tau};
}

ScatterPoint scatter_point(const TransceiverGeometry& g, double tau, double varpi, double vartheta) {
  return scatter_point(Link::from(g), tau, varpi, vartheta);
}

ScatterPoint to_beam_coordinates(const Link& link, const Vec3& p) {
  const double tau = norm(p);
  if (tau == 0.0) throw DomainError("point", "origin has no beam coordinates");
  const Vec3 d = p / tau;
  const Vec3 h{std::cos(link.alpha_t), std::sin(link.alpha_t), 0.0};
  const Vec3 g{-std::sin(link.alpha_t), std::cos(link.alpha_t), 0.0};
  const double dh = dot(d, h);
  const double varpi = std::atan2(dot(d, g), std::hypot(dh, d.z));
  const double vartheta = std::atan2(d.z, dh) - link.theta_t;
  return {tau, varpi, vartheta, p};
}

bool ConeRayRoots::contains(double tau) const {
  switch (kind) {
    case RootKind::empty: return false;
    case RootKind::segment: return tau >= tau_lo && tau <= tau_hi;
    default: return tau >= tau_lo;
  }
}

QuadraticCoefficients cone_quadratic(const TransceiverGeometry& g, double vartheta, double varpi) {
  const Vec3 d = Link::from(g).beam_direction(vartheta, varpi);
  const Vec3 h = direction_from_angles(g.theta_r, g.alpha_r);
  const double c2 = std::cos(g.beta_r) * std::cos(g.beta_r);
  const double dh = dot(d, h);
  const double r = g.range_r;
  return {dot(d, d) * c2 - dh * dh, 2.0 * r * dh * h.y - 2.0 * r * d.y * c2, r * r * (c2 - h.y * h.y)};
}

Interval line_cone_interval(const Vec3& o, const Vec3& d, const Cone& cone, double t_min, double t_max) {
  const double c2 = std::cos(cone.half_angle) * std::cos(cone.half_angle);
  const Vec3 w = o - cone.apex;
  const double dh = dot(d, cone.axis);
  const double wh = dot(w, cone.axis);
  const double qa = c2 * dot(d, d) - dh * dh;
  const double qb = 2.0 * (c2 * dot(w, d) - wh * dh);
  const double qc = c2 * dot(w, w) - wh * wh;

  std::vector<double> cuts;
  if (std::abs(qa) > 1e-14 * dot(d, d)) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
      if (q != 0.0) {
        cuts.push_back(q / qa);
        cuts.push_back(qc / q);
      } else {
        cuts.push_back(0.0);
      }
    }
  } else if (qb != 0.0) {
    cuts.push_back(-qc / qb);
  }
  std::vector<double> pts{t_min};
  for (double c : cuts)
    if (c > t_min && c < t_max) pts.push_back(c);
  pts.push_back(t_max);
  std::sort(pts.begin(), pts.end());

  const double cb = std::cos(cone.half_angle);
  auto inside = [&](double t) {
    const Vec3 v = w + d * t;
    return dot(v, cone.axis) >= cb * norm(v);
  };
  Interval out;
  bool found = false;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    if (!(b > a)) continue;
    double mid;
    if (std::isinf(a) && std::isinf(b)) mid = 0.0;
    else if (std::isinf(a)) mid = b - std::max(1.0, std::abs(b));
    else if (std::isinf(b)) mid = a + std::max(1.0, std::abs(a));
    else mid = 0.5 * (a + b);
    if (!inside(mid)) continue;
    if (!found) {
      out.lo = a;
      found = true;
    }
    out.hi = b;
  }
  if (!found) return {};
  return out;
}

ConeRayRoots ray_cone_roots(const TransceiverGeometry& g, double vartheta, double varpi) {
  const Link link = Link::from(g);
  const Vec3 d = link.beam_direction(vartheta, varpi);
  const Interval iv = line_cone_interval({}, d, link.rx_cone(), 0.0, kInf);
  if (iv.empty() || iv.hi <= iv.lo) return {};
  if (std::isinf(iv.hi)) {
    const QuadraticCoefficients q = cone_quadratic(g, vartheta, varpi);
    const bool linear = std::abs(q.xi1) <= 1e-14;
    return {linear ? RootKind::half_line_from_tau0 : RootKind::half_line_from_tau2, iv.lo, kInf};
  }
  return {RootKind::segment, iv.lo, iv.hi};
}

double ray_cone_margin(const Vec3& d, const Cone& cone) {
  const Vec3 apex = cone.apex;
  const double a = dot(d, cone.axis);
  const double r2 = dot(apex, apex);
  const double cb = std::cos(cone.half_angle);
  if (r2 == 0.0) return a - cb;
  const double r = std::sqrt(r2);
  const double b = -dot(apex, cone.axis);
  const double p = -dot(d, apex);
  double best = std::max(b / r, a);
  const double den = a * p - b;
  if (den != 0.0) {
    const double ts = (b * p - a * r2) / den;
    if (ts > 0.0) {
      const double q = ts * ts + 2.0 * p * ts + r2;
      if (q > 0.0) best = std::max(best, (a * ts + b) / std::sqrt(q));
    }
  }
  return best - cb;
}

// ---------------------------------------------------------------------------

std::array<double, 4> tx_vertex_angles(const Obstacle& o, const TransceiverGeometry& g) {
  const double cot = std::cos(g.alpha_t) / std::sin(g.alpha_t);
  std::array<double, 4> out{};
  for (int n = 0; n < 4; ++n) {
    const double den = std::abs(o.top[n].x * cot + o.top[n].y);
    out[n] = std::atan2(o.height_kappa * std::sqrt(cot * cot + 1.0), den);
  }
  return out;
}

std::array<double, 4> rx_vertex_angles(const Obstacle& o, const TransceiverGeometry& g) {
  const double cot = std::cos(g.alpha_r) / std::sin(g.alpha_r);
  std::array<double, 4> out{};
  for (int n = 0; n < 4; ++n) {
    const double den = std::abs(o.top[n].x * cot + o.top[n].y - g.range_r);
    out[n] = std::atan2(o.height_kappa * std::sqrt(cot * cot + 1.0), den);
  }
  return out;
}

TxScenario classify_tx_angles(const std::array<double, 4>& th) {
  const double a = th[0], b = th[1], c = th[2], d = th[3];
  if (greater(c, b) && greater(b, d) && greater(d, a)) return TxScenario::T1;
  if (greater(c, d) && greater_eq(d, b) && greater(b, a)) return TxScenario::T2;
  if (approx_eq(c, d) && greater(d, b) && approx_eq(b, a)) return TxScenario::T3;
  if (greater(b, c) && greater(c, a) && greater(a, d)) return TxScenario::T4;
  if (approx_eq(b, c) && greater(c, a) && approx_eq(a, d)) return TxScenario::T5;
  if (greater(d, c) && greater(c, a) && greater(a, b)) return TxScenario::T6;
  throw UnclassifiableError("Tx vertex angles match no scenario", th);
}

RxScenario classify_rx_angles(const std::array<double, 4>& th) {
  const double a = th[0], b = th[1], c = th[2], d = th[3];
  if (greater(d, a) && greater(a, c) && greater(c, b)) return RxScenario::R1;
  if (greater(d, c) && greater_eq(c, a) && greater(a, b)) return RxScenario::R2;
  if (approx_eq(d, c) && greater(c, a) && approx_eq(a, b)) return RxScenario::R3;
  if (greater(a, d) && greater(d, b) && greater(b, c)) return RxScenario::R4;
  if (approx_eq(a, d) && greater(d, b) && approx_eq(b, c)) return RxScenario::R5;
  if (greater(c, d) && greater(d, b) && greater(b, a)) return RxScenario::R6;
  throw UnclassifiableError("Rx vertex angles match no scenario", th);
}

TxScenario classify_tx_scenario(const Obstacle& o, const TransceiverGeometry& g) {
  return classify_tx_angles(tx_vertex_angles(o, g));
}

RxScenario classify_rx_scenario(const Obstacle& o, const TransceiverGeometry& g) {
  return classify_rx_angles(rx_vertex_angles(o, g));
}

std::string to_string(TxScenario s) { return "T" + std::to_string(static_cast<int>(s)); }
std::string to_string(RxScenario s) { return "R" + std::to_string(static_cast<int>(s)); }

std::string to_string(Edge e) {
  switch (e) {
    case Edge::aa: return "aa'";
    case Edge::bb: return "bb'";
    case Edge::cc: return "cc'";
    case Edge::dd: return "dd'";
    case Edge::ab: return "ab";
    case Edge::bc: return "bc";
    case Edge::cd: return "cd";
    case Edge::da: return "da";
  }
  return "?";
}

// ---------------------------------------------------------------------------

PlaneCoefficients tx_plane_coefficients(const TransceiverGeometry& g, double vartheta) {
  require(std::abs(vartheta) < g.beta_t, "vartheta", "must lie in (-beta_t, beta_t)");
  const double delta = g.theta_t + vartheta;
  const double sec2 = 1.0 / (std::cos(vartheta) * std::cos(vartheta));
  const double tphi = std::sqrt(std::tan(g.beta_t) * std::tan(g.beta_t) - std::tan(vartheta) * std::tan(vartheta)) *
                      std::cos(vartheta) / std::cos(delta);
  return {-std::cos(g.alpha_t) * sec2 * std::sin(2.0 * delta) * tphi,
          -std::sin(g.alpha_t) * sec2 * std::sin(2.0 * delta) * tphi,
          2.0 * sec2 * std::cos(delta) * std::cos(delta) * tphi};
}

PlaneCoefficients rx_plane_coefficients(const TransceiverGeometry& g, double sigma) {
  require(std::abs(sigma) < g.beta_r, "sigma", "must lie in (-beta_r, beta_r)");
  const double delta = g.theta_r + sigma;
  const double sec2 = 1.0 / (std::cos(sigma) * std::cos(sigma));
  const double tphi = std::sqrt(std::tan(g.beta_r) * std::tan(g.beta_r) - std::tan(sigma) * std::tan(sigma)) *
                      std::cos(sigma) / std::cos(delta);
  return {-std::cos(g.alpha_r) * sec2 * std::sin(2.0 * delta) * tphi,
          -std::sin(g.alpha_r) * sec2 * std::sin(2.0 * delta) * tphi,
          2.0 * sec2 * std::cos(delta) * std::cos(delta) * tphi};
}

Vec3 tx_edge_point(const TransceiverGeometry& g, const Obstacle& o, double vartheta, Edge e) {
  return plane_edge_point(o, tilted_plane_normal(g.theta_t + vartheta, g.alpha_t), {}, e);
}

Vec3 rx_edge_point(const TransceiverGeometry& g, const Obstacle& o, double sigma, Edge e) {
  return plane_edge_point(o, tilted_plane_normal(g.theta_r + sigma, g.alpha_r), {0.0, g.range_r, 0.0}, e);
}

double psi_of_point_tx(const TransceiverGeometry& g, double vartheta, const Vec3& p) {
  return in_plane_angle(tilted_plane_normal(g.theta_t + vartheta, g.alpha_t), {}, p, 1.0);
}

double psi_of_point_rx(const TransceiverGeometry& g, double sigma, const Vec3& p) {
  return in_plane_angle(tilted_plane_normal(g.theta_r + sigma, g.alpha_r), {0.0, g.range_r, 0.0}, p, -1.0);
}

double psi_angle_tx(const TransceiverGeometry& g, const Obstacle& o, double vartheta, Edge e) {
  return psi_of_point_tx(g, vartheta, tx_edge_point(g, o, vartheta, e));
}

double psi_angle_rx(const TransceiverGeometry& g, const Obstacle& o, double sigma, Edge e) {
  return psi_of_point_rx(g, sigma, rx_edge_point(g, o, sigma, e));
}

double sigma_of_point(const TransceiverGeometry& g, const Vec3& p) {
  const Vec3 h{std::cos(g.alpha_r), std::sin(g.alpha_r), 0.0};
  const Vec3 v = p - Vec3{0.0, g.range_r, 0.0};
  return std::atan2(v.z, dot(v, h)) - g.theta_r;
}

double vartheta_of_point(const TransceiverGeometry& g, const Vec3& p) {
  const Vec3 h{std::cos(g.alpha_t), std::sin(g.alpha_t), 0.0};
  return std::atan2(p.z, dot(p, h)) - g.theta_t;
}

namespace {

constexpr Edge kAllEdges[8] = {Edge::aa, Edge::bb, Edge::cc, Edge::dd, Edge::ab, Edge::bc, Edge::cd, Edge::da};

int interval_of(const std::array<double, 4>& theta, double delta) {
  std::array<double, 4> s = theta;
  std::sort(s.begin(), s.end());
  if (delta >= s[3]) throw DomainError("delta", "plane passes above the obstacle");
  int k = 1;
  while (k < 4 && delta > s[k - 1]) ++k;
  return k;
}

template <class PointFn, class PsiFn>
PsiExtrema silhouette(PointFn point, PsiFn psi) {
  PsiExtrema out{kInf, -kInf, 0};
  for (Edge e : kAllEdges) {
    Vec3 p;
    try {
      p = point(e);
    } catch (const NoIntersection&) {
      continue;
    }
    const double v = psi(p);
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  }
  if (out.min > out.max) throw NoIntersection("silhouette");
  return out;
}

}  // namespace

PsiExtrema psi_extrema_rx(const TransceiverGeometry& g, const Obstacle& o, double sigma) {
  const std::array<double, 4> theta = rx_vertex_angles(o, g);
  const int k = interval_of(theta, g.theta_r + sigma);
  const bool r1 = [&] {
    try {
      return classify_rx_angles(theta) == RxScenario::R1;
    } catch (const UnclassifiableError&) {
      return false;
    }
  }();
  if (r1) {
    auto P = [&](Edge e) { return psi_angle_rx(g, o, sigma, e); };
    switch (k) {
      case 1: return {std::min({P(Edge::bb), P(Edge::cc), P(Edge::dd)}), std::max({P(Edge::aa), P(Edge::bb), P(Edge::dd)}), 1};
      case 2: return {std::min({P(Edge::bc), P(Edge::cc), P(Edge::dd)}), std::max({P(Edge::aa), P(Edge::ab), P(Edge::dd)}), 2};
      case 3: return {std::min(P(Edge::cd), P(Edge::dd)), std::max({P(Edge::aa), P(Edge::ab), P(Edge::dd)}), 3};
      default: return {std::min(P(Edge::cd), P(Edge::dd)), std::max(P(Edge::da), P(Edge::dd)), 4};
    }
  }
  PsiExtrema out = silhouette([&](Edge e) { return rx_edge_point(g, o, sigma, e); },
                              [&](const Vec3& p) { return psi_of_point_rx(g, sigma, p); });
  out.interval = k;
  return out;
}

PsiExtrema psi_extrema_tx(const TransceiverGeometry& g, const Obstacle& o, double vartheta) {
  const int k = interval_of(tx_vertex_angles(o, g), g.theta_t + vartheta);
  PsiExtrema out = silhouette([&](Edge e) { return tx_edge_point(g, o, vartheta, e); },
                              [&](const Vec3& p) { return psi_of_point_tx(g, vartheta, p); });
  out.interval = k;
  return out;
}

BoundaryRays boundary_rays(const TransceiverGeometry& g) {
  const Vec3 r{0.0, g.range_r, 0.0};
  return {{{}, direction_from_angles(g.delta_t_low(), g.alpha_t)},
          {r, direction_from_angles(g.delta_r_high(), g.alpha_r)},
          {r, direction_from_angles(g.delta_r_low(), g.alpha_r)}};
}

}  // namespace uvnlos::geometry
