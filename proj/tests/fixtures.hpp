// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

#include "uvnlos/atmosphere.hpp"
#include "uvnlos/geometry.hpp"

namespace fixtures {

inline constexpr double kDeg = M_PI / 180.0;

inline const uvnlos::atmosphere::Atmosphere kAtm{0.24, 0.25, 0.90, 0.017, 0.72, 0.5};

/// Validation link; scenario 1 has theta_t = 25 deg, theta_r = 35 deg, scenario 2 the swap.
inline uvnlos::geometry::TransceiverGeometry validation_link(int scenario, double r) {
  const double tt = scenario == 1 ? 25.0 : 35.0;
  const double tr = scenario == 1 ? 35.0 : 25.0;
  return {30 * kDeg, 30 * kDeg, tt * kDeg, tr * kDeg, 95 * kDeg, -95 * kDeg, r, 1.92e-4};
}

/// Wall facing the link: s = r/10, w = 2r, kappa = 2r, x_o = x_o,max - s, y_o = r/2.
inline uvnlos::geometry::Obstacle validation_wall(double r) {
  const double s = r / 10.0, w = 2.0 * r;
  return uvnlos::geometry::obstacle_vertices(w, s, 2.0 * r, uvnlos::geometry::x_o_max(w, s, 0.0) - s, r / 2.0, 0.0);
}

inline uvnlos::geometry::TransceiverGeometry orientation_link(double r) {
  return {M_PI / 12, M_PI / 12, M_PI / 9, M_PI / 9, 2 * M_PI / 3, -2 * M_PI / 3, r, 1.92e-4};
}

/// 40 x 30 x 80 m block, x_o = x_o,max - s, y_o = r/2.
inline uvnlos::geometry::Obstacle orientation_block(double r, double alpha) {
  return uvnlos::geometry::obstacle_vertices(40.0, 30.0, 80.0, uvnlos::geometry::x_o_max(40.0, 30.0, alpha) - 30.0,
                                             r / 2.0, alpha);
}

// Largest normalised local coordinate minus one: negative strictly inside the box.
inline double box_depth(const uvnlos::geometry::Cuboid& box, const uvnlos::Vec3& p) {
  const uvnlos::Vec3 l = box.to_local(p);
  return std::max({std::abs(l.x) / box.half_s, std::abs(l.y) / box.half_w,
                   std::abs(l.z - box.height / 2) / (box.height / 2)}) - 1.0;
}

// Dense scan of the segment followed by ternary refinement (box_depth is convex along a line).
inline bool occluded_by_sampling(const uvnlos::Vec3& p0, const uvnlos::Vec3& p1, const uvnlos::geometry::Cuboid& box) {
  constexpr int kN = 256;
  int best = 0;
  double fbest = 1e300;
  for (int i = 0; i <= kN; ++i) {
    const double f = box_depth(box, p0 + (p1 - p0) * (double(i) / kN));
    if (f < fbest) fbest = f, best = i;
  }
  double a = std::max(0, best - 1) / double(kN), b = std::min(kN, best + 1) / double(kN);
  for (int it = 0; it < 100; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (box_depth(box, p0 + (p1 - p0) * m1) < box_depth(box, p0 + (p1 - p0) * m2)) b = m2;
    else a = m1;
  }
  return std::min(fbest, box_depth(box, p0 + (p1 - p0) * (0.5 * (a + b)))) < -1e-7;
}

}  // namespace fixtures
