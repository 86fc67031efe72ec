// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>

#include "uvnlos/vec3.hpp"

namespace uvnlos::geometry {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ElevationBounds { strict, relaxed };

/// Non-coplanar link: T at the origin, R at (0, r, 0), both on the ground.
/// Angles in radians, range and aperture in SI units.
struct TransceiverGeometry {
  double beta_t{0.0};   ///< Tx beam half-angle
  double beta_r{0.0};   ///< Rx field-of-view half-angle
  double theta_t{0.0};  ///< Tx elevation
  double theta_r{0.0};  ///< Rx elevation
  double alpha_t{0.0};  ///< Tx azimuth from +x, in [pi/2, pi)
  double alpha_r{0.0};  ///< Rx azimuth from +x, in (-pi, -pi/2]
  double range_r{0.0};  ///< T-R baseline [m]
  double aperture_area{0.0};  ///< Rx aperture A_r [m^2]

  double delta_t_low() const { return theta_t - beta_t; }
  double delta_t_high() const { return theta_t + beta_t; }
  double delta_r_low() const { return theta_r - beta_r; }
  double delta_r_high() const { return theta_r + beta_r; }

  bool operator==(const TransceiverGeometry&) const = default;
};

/// Throws DomainError naming the first violated invariant.
void validate(const TransceiverGeometry& g, ElevationBounds bounds = ElevationBounds::strict);

/// Ground-mounted cuboid. Vertices A..D are the top corners (z = kappa),
/// counter-clockwise rotation by alpha about (x_o, y_o).
struct Obstacle {
  double width_w{0.0};
  double thickness_s{0.0};
  double height_kappa{0.0};
  double x_o{0.0};
  double y_o{0.0};
  double alpha{0.0};
  std::array<Vec3, 4> top{};  ///< A, B, C, D at z = kappa

  enum Vertex : int { a = 0, b = 1, c = 2, d = 3 };
  Vec3 vertex(Vertex v) const { return top[v]; }
  Vec3 ground(Vertex v) const { return {top[v].x, top[v].y, 0.0}; }
};

double threshold_angle(double width_w, double thickness_s);
double half_diagonal(double width_w, double thickness_s);
double x_o_max(double width_w, double thickness_s, double alpha);
double y_o_min(double width_w, double thickness_s, double alpha);

/// Throws DomainError unless w > s > 0, kappa >= 0, |alpha| <= alpha_th, x_o < x_o,max.
Obstacle obstacle_vertices(double width_w, double thickness_s, double height_kappa, double x_o,
                           double y_o, double alpha);

/// y_o,min < y_o < r - y_o,min: obstacle strictly between T and R in y.
void validate_span(const Obstacle& o, double range_r);

/// Oriented box in an arbitrary horizontal frame. `alpha` keeps the obstacle's
/// own orientation, `yaw` its heading in the current frame.
struct Cuboid {
  Vec3 center{};  ///< footprint centre, z = 0
  double half_s{0.0};
  double half_w{0.0};
  double height{0.0};
  double yaw{0.0};
  double alpha{0.0};
  double cos_yaw{1.0};
  double sin_yaw{0.0};

  static Cuboid from(const Obstacle& o);
  Cuboid rotated_about_z(double angle) const;

  Vec3 to_local(const Vec3& p) const;
  Vec3 to_world(const Vec3& local) const;
  /// Ground corner of vertex 0..3 (A, B, C, D).
  Vec3 corner(int v) const;
  bool contains(const Vec3& p) const;
};

enum class BoxFace { none, front_cd, back_ab, side_da, side_bc, top };

struct BoxHit {
  double t{kInf};
  BoxFace face{BoxFace::none};
};

/// First entry of the ray o + t d (t > t_min) into the box.
BoxHit ray_box_entry(const Vec3& o, const Vec3& d, const Cuboid& box, double t_min = 0.0);

/// Segment [p0, p1] passes through the box interior.
bool segment_occluded(const Vec3& p0, const Vec3& p1, const Cuboid& box);

struct Cone {
  Vec3 apex{};
  Vec3 axis{};  ///< unit
  double half_angle{0.0};

  bool contains(const Vec3& p, double tol = 0.0) const;
};

/// Link in an arbitrary frame with T fixed at the origin. Azimuths are unrestricted.
struct Link {
  double beta_t{0.0};
  double beta_r{0.0};
  double theta_t{0.0};
  double theta_r{0.0};
  double alpha_t{0.0};
  double alpha_r{0.0};
  Vec3 receiver{};
  double aperture_area{0.0};

  static Link from(const TransceiverGeometry& g);
  Link rotated_about_z(double angle) const;

  Vec3 tx_axis() const { return direction_from_angles(theta_t, alpha_t); }
  Vec3 rx_axis() const { return direction_from_angles(theta_r, alpha_r); }
  Cone tx_cone() const { return {{}, tx_axis(), beta_t}; }
  Cone rx_cone() const { return {receiver, rx_axis(), beta_r}; }
  double range() const { return norm(receiver); }

  /// Unit direction of the beam ray (vartheta, varpi).
  Vec3 beam_direction(double vartheta, double varpi) const;
};

/// Tx-cone boundary in the plane at elevation offset vartheta: |varpi| <= varpi_max.
double varpi_max(double beta_t, double vartheta);

struct ScatterPoint {
  double tau{0.0};
  double varpi{0.0};
  double vartheta{0.0};
  Vec3 cartesian{};
};

ScatterPoint scatter_point(const TransceiverGeometry& g, double tau, double varpi, double vartheta);
ScatterPoint scatter_point(const Link& link, double tau, double varpi, double vartheta);

/// Inverse of scatter_point. Throws DomainError for the origin.
ScatterPoint to_beam_coordinates(const Link& link, const Vec3& p);

/// |J3| of (tau, varpi, vartheta) -> Cartesian.
inline double jacobian_j3(double tau, double varpi) { return tau * tau * std::cos(varpi); }

enum class RootKind { half_line_from_tau0, half_line_from_tau2, segment, empty };

/// Set of tau >= 0 where a ray point lies in the forward nappe of a cone.
/// Segment covers [tau_lo, tau_hi]; half-lines cover [tau_lo, inf).
struct ConeRayRoots {
  RootKind kind{RootKind::empty};
  double tau_lo{0.0};
  double tau_hi{0.0};

  bool contains(double tau) const;
};

/// xi1 tau^2 + xi2 tau + xi3 <= 0 inside the Rx double cone.
struct QuadraticCoefficients {
  double xi1{0.0};
  double xi2{0.0};
  double xi3{0.0};
};

QuadraticCoefficients cone_quadratic(const TransceiverGeometry& g, double vartheta, double varpi);

ConeRayRoots ray_cone_roots(const TransceiverGeometry& g, double vartheta, double varpi);

/// General form: the set of t in [t_min, t_max] with o + t d inside the forward nappe.
/// A closed interval or empty; bounds may be infinite.
struct Interval {
  double lo{0.0};
  double hi{-1.0};
  bool empty() const { return !(hi >= lo); }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

Interval line_cone_interval(const Vec3& o, const Vec3& d, const Cone& cone,
                            double t_min = -kInf, double t_max = kInf);

/// max over tau >= 0 of cos(angle(T + tau d - apex, axis)) minus cos(half_angle).
/// Positive iff the ray from the origin enters the forward cone interior.
double ray_cone_margin(const Vec3& d, const Cone& cone);

// ---------------------------------------------------------------------------
// Vertex-angle scenario classification

enum class TxScenario { T1 = 1, T2, T3, T4, T5, T6 };
enum class RxScenario { R1 = 1, R2, R3, R4, R5, R6 };

/// Theta_{t,n}: elevation of the plane through TG and top vertex n.
std::array<double, 4> tx_vertex_angles(const Obstacle& o, const TransceiverGeometry& g);
/// Theta_{r,n}: elevation of the plane through RQ and top vertex n.
std::array<double, 4> rx_vertex_angles(const Obstacle& o, const TransceiverGeometry& g);

TxScenario classify_tx_scenario(const Obstacle& o, const TransceiverGeometry& g);
RxScenario classify_rx_scenario(const Obstacle& o, const TransceiverGeometry& g);
TxScenario classify_tx_angles(const std::array<double, 4>& theta);
RxScenario classify_rx_angles(const std::array<double, 4>& theta);

std::string to_string(TxScenario s);
std::string to_string(RxScenario s);

// ---------------------------------------------------------------------------
// Plane-edge intersections and Psi angles

/// a x + b y + c z = 0 (Tx), a x + b (y - r) + c z = 0 (Rx).
struct PlaneCoefficients {
  double a{0.0};
  double b{0.0};
  double c{0.0};
};

PlaneCoefficients tx_plane_coefficients(const TransceiverGeometry& g, double vartheta);
PlaneCoefficients rx_plane_coefficients(const TransceiverGeometry& g, double sigma);

/// Vertical edges nn' and top edges mn of the obstacle.
enum class Edge { aa, bb, cc, dd, ab, bc, cd, da };

std::string to_string(Edge e);

Vec3 tx_edge_point(const TransceiverGeometry& g, const Obstacle& o, double vartheta, Edge e);
Vec3 rx_edge_point(const TransceiverGeometry& g, const Obstacle& o, double sigma, Edge e);

/// Angle at T between TK and T P_{t,e}; TK is the plane's trace in x = 0.
double psi_angle_tx(const TransceiverGeometry& g, const Obstacle& o, double vartheta, Edge e);
/// Angle at R between RS and R P_{r,e}; RS is the plane's trace in x = 0.
double psi_angle_rx(const TransceiverGeometry& g, const Obstacle& o, double sigma, Edge e);

/// Psi of an arbitrary point in the Tx / Rx plane.
double psi_of_point_tx(const TransceiverGeometry& g, double vartheta, const Vec3& p);
double psi_of_point_rx(const TransceiverGeometry& g, double sigma, const Vec3& p);

struct PsiExtrema {
  double min{0.0};
  double max{0.0};
  int interval{0};  ///< 1..4, position of delta_r among the sorted vertex angles
};

/// Silhouette extrema of the obstacle within the plane L_sigma.
PsiExtrema psi_extrema_rx(const TransceiverGeometry& g, const Obstacle& o, double sigma);
PsiExtrema psi_extrema_tx(const TransceiverGeometry& g, const Obstacle& o, double vartheta);

/// Elevation offset of P about RQ: the sigma whose plane L_sigma contains P.
double sigma_of_point(const TransceiverGeometry& g, const Vec3& p);
/// Elevation offset of P about TG.
double vartheta_of_point(const TransceiverGeometry& g, const Vec3& p);

// ---------------------------------------------------------------------------

struct BoundaryRay {
  Vec3 origin{};
  Vec3 direction{};
  Vec3 at(double omega) const { return origin + direction * omega; }
};

/// TJ (Tx lower edge), RU (Rx upper edge), RV (Rx lower edge), all in their axis' vertical plane.
struct BoundaryRays {
  BoundaryRay tx_low;
  BoundaryRay rx_high;
  BoundaryRay rx_low;
};

BoundaryRays boundary_rays(const TransceiverGeometry& g);

}  // namespace uvnlos::geometry
