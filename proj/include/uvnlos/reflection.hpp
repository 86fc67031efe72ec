// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uvnlos/atmosphere.hpp"
#include "uvnlos/geometry.hpp"
#include "uvnlos/quadrature.hpp"
#include "uvnlos/result.hpp"
#include "uvnlos/scattering.hpp"

namespace uvnlos::reflection {

/// Phong surface: reflectivity, specular exponent, diffuse fraction.
struct ReflectionParams {
  double r_r{0.1};
  double m_s{5.0};
  double eta{0.5};

  bool operator==(const ReflectionParams&) const = default;
};

void validate(const ReflectionParams& p);

enum class SurfaceLabel { cdd_c, daa_d, bcc_b };

std::string to_string(SurfaceLabel l);

/// Vertical face spanned by ground corners m -> n and the obstacle height.
struct ReflectionSurface {
  SurfaceLabel label{SurfaceLabel::cdd_c};
  Vec3 normal{};  ///< outward unit normal
  bool active{true};
  Vec3 m{};
  Vec3 n{};
  double height{0.0};

  double edge_length() const { return norm(n - m); }
  Vec3 point(double u, double z) const { return m + (n - m) * u + Vec3{0.0, 0.0, z}; }
  /// x on the face's ground line at abscissa y (undefined for faces parallel to x).
  double x_at_y(double y) const { return m.x + (y - m.y) * (n.x - m.x) / (n.y - m.y); }
};

/// CDD'C' always; DAA'D' when alpha < 0; BCC'B' when alpha > 0.
std::vector<ReflectionSurface> reflection_surfaces(const geometry::Obstacle& o);
std::vector<ReflectionSurface> reflection_surfaces(const geometry::Cuboid& box);

/// Phong lobe per steradian: diffuse cos(theta1)/pi plus normalised specular cos^m(theta2).
double phong_intensity(const ReflectionParams& p, double cos_theta1, double cos_theta2);

/// Local reflection angles at U on a surface.
struct ReflectionAngles {
  double tau{0.0};
  double eps{0.0};
  double cos_omega_i{0.0};
  double cos_theta1{0.0};
  double cos_theta2{0.0};
  double cos_theta_v{0.0};
};

ReflectionAngles reflection_angles(const geometry::Link& link, const ReflectionSurface& s, const Vec3& u);

/// 1 when U is lit by the beam, seen by the Rx, and neither leg is blocked.
int reflection_weight(const geometry::Link& link, const geometry::Cuboid& box, const ReflectionSurface& s,
                      const Vec3& u);

/// Received energy per unit surface area from reflection at U.
double reflection_density(const geometry::Link& link, const atmosphere::Atmosphere& atm,
                          const ReflectionParams& p, const ReflectionSurface& s, const Vec3& u, double q_t);

struct ReflectionGridConfig {
  int n_u{64};
  int n_z{64};
  QuadratureKind quadrature{QuadratureKind::gauss};
  int threads{0};
  bool error_estimate{true};

  bool operator==(const ReflectionGridConfig&) const = default;
};

PathLossResult integrate_reflection(const geometry::Link& link, const geometry::Cuboid& box,
                                    const atmosphere::Atmosphere& atm, const ReflectionParams& p, double q_t,
                                    const ReflectionGridConfig& config = {});
PathLossResult integrate_reflection(const geometry::TransceiverGeometry& g, const geometry::Obstacle& o,
                                    const atmosphere::Atmosphere& atm, const ReflectionParams& p, double q_t,
                                    const ReflectionGridConfig& config = {});

/// Scattering with obstacle plus reflection. Without obstacle this is the exact model.
PathLossResult total_pathloss(const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                              const atmosphere::Atmosphere& atm, const ReflectionParams& p, double q_t,
                              const scattering::ScatterIntegralConfig& scatter = {},
                              const ReflectionGridConfig& grid = {});

}  // namespace uvnlos::reflection
