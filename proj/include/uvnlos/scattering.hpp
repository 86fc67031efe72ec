// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "uvnlos/atmosphere.hpp"
#include "uvnlos/geometry.hpp"
#include "uvnlos/quadrature.hpp"
#include "uvnlos/result.hpp"

namespace uvnlos::scattering {

struct ScatterIntegralConfig {
  int n_theta{64};
  int n_varpi{64};
  int n_tau{64};
  double tau_truncation_factor{10.0};
  QuadratureKind quadrature{QuadratureKind::gauss};
  int threads{0};  ///< 0: hardware concurrency
  bool error_estimate{true};

  bool operator==(const ScatterIntegralConfig&) const = default;
};

void validate(const ScatterIntegralConfig& c);

/// Received energy density per d tau d varpi d vartheta for a scatter point
/// in the Tx beam (tau^2 of the volume element already cancelled).
double kernel(const geometry::Link& link, const atmosphere::Atmosphere& atm,
              const geometry::ScatterPoint& p, double q_t);

/// 1 when P lies in the Rx cone, above ground, and both legs T-P and P-R are clear.
int weighting_factor(const geometry::Link& link, const geometry::Cuboid* box, const Vec3& p);
int weighting_factor(const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                     const geometry::ScatterPoint& p);

/// vartheta values whose beam plane reaches the Rx cone.
geometry::Interval vartheta_hit_range(const geometry::Link& link);
/// varpi values at fixed vartheta whose ray reaches the Rx cone.
geometry::Interval varpi_hit_range(const geometry::Link& link, double vartheta);
/// Finite tau range integrated along a ray; empty when it misses the Rx cone.
geometry::Interval tau_range(const geometry::Link& link, const Vec3& direction, double truncation_factor);

/// Single-scattering received energy with optional obstacle.
PathLossResult integrate_scattering(const geometry::Link& link, const geometry::Cuboid* box,
                                    const atmosphere::Atmosphere& atm, double q_t,
                                    const ScatterIntegralConfig& config = {});
PathLossResult integrate_scattering(const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                                    const atmosphere::Atmosphere& atm, double q_t,
                                    const ScatterIntegralConfig& config = {});

}  // namespace uvnlos::scattering
