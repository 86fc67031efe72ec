// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uvnlos/atmosphere.hpp"
#include "uvnlos/geometry.hpp"
#include "uvnlos/quadrature.hpp"
#include "uvnlos/result.hpp"

namespace uvnlos::simplified {

/// One pencil of the ring tiling: layer i, index j in the layer.
struct SubBeam {
  int layer{0};
  int index{0};
  double vartheta{0.0};  ///< elevation offset of the sub-beam axis
  double phi{0.0};       ///< azimuth offset of the sub-beam axis
  double beta_j{0.0};    ///< position angle around the beam axis
  Vec3 direction{};      ///< unit axis
};

struct SamplingPlan {
  double beta{0.0};
  int nu{0};
  std::vector<int> nu_i;  ///< sub-beams per layer, nu_i[0] = 1
  std::vector<SubBeam> beams;
  double energy_fraction{0.0};  ///< Q^t_ij / Q_t

  double total_fraction() const { return energy_fraction * static_cast<double>(beams.size()); }
};

/// Tangent-ring radicand term for layer i >= 1. Throws DomainError when not real.
double upsilon(int i, double beta);

SamplingPlan build_sampling_plan(const geometry::TransceiverGeometry& g, double beta);

/// Integration limits on the sub-beam axis, half-lines truncated by `factor`.
geometry::Interval subbeam_tau_limits(const geometry::Link& link, const SubBeam& b, double factor);

struct SimplifiedConfig {
  double beta{0.0};  ///< sampling accuracy; 0 selects beta_t / 50
  int u{30};         ///< Gauss-Legendre order along each sub-beam
  double tau_truncation_factor{10.0};
  int threads{0};

  bool operator==(const SimplifiedConfig&) const = default;
};

PathLossResult simplified_pathloss(const geometry::TransceiverGeometry& g, const atmosphere::Atmosphere& atm,
                                   double q_t, const SimplifiedConfig& config = {});

}  // namespace uvnlos::simplified
