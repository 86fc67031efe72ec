// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uvnlos/atmosphere.hpp"
#include "uvnlos/geometry.hpp"
#include "uvnlos/philox.hpp"
#include "uvnlos/reflection.hpp"
#include "uvnlos/result.hpp"

namespace uvnlos::mcpt {

struct McptConfig {
  std::uint64_t n_photons{10'000'000};
  double survival_threshold{1e-10};
  int collision_order{1};
  std::uint64_t rng_seed{0x5EEDu};
  bool enable_reflection{true};
  int threads{0};
  std::uint64_t block_size{65536};  ///< photons per reduction block

  bool operator==(const McptConfig&) const = default;
};

void validate(const McptConfig& c);

/// Inverse-CDF sampler of the scattering-angle cosine.
class PhaseSampler {
 public:
  explicit PhaseSampler(const atmosphere::Atmosphere& atm, int bins = 4096);
  double sample_mu(double u) const;
  int bins() const { return static_cast<int>(cdf_.size()) - 1; }

 private:
  std::vector<double> cdf_;  ///< at mu = -1 + 2 k / bins
};

/// Unit vector at polar angle acos(cos_theta) and azimuth phi about `axis`.
Vec3 rotate_into(const Vec3& axis, double cos_theta, double phi);

/// Phong outgoing direction: diffuse branch with probability eta, else the
/// cos^m lobe about the mirror direction.
Vec3 sample_phong_direction(const reflection::ReflectionParams& p, const Vec3& normal, const Vec3& incident,
                            double u_branch, double u1, double u2);

enum class PhotonEvent { ground, escaped, scattered, reflected, absorbed, roulette_killed };

struct PhotonTrace {
  PhotonEvent event{PhotonEvent::escaped};
  Vec3 emitted{};
  Vec3 collision{};
  Vec3 outgoing{};
  double weight{0.0};
  double contribution{0.0};  ///< expected arrival per unit emitted energy
  bool reflected{false};
};

/// Single-photon tracer with next-event estimation at the Rx.
class PhotonTracer {
 public:
  PhotonTracer(const geometry::Link& link, const geometry::Cuboid* box, const atmosphere::Atmosphere& atm,
               const reflection::ReflectionParams& params, const McptConfig& config);

  PhotonTrace trace(PhotonStream& rng) const;

 private:
  bool sees_receiver(const Vec3& p, double& cos_v, double& eps, Vec3& to_r) const;

  geometry::Link link_;
  std::optional<geometry::Cuboid> box_;
  std::vector<reflection::ReflectionSurface> surfaces_;
  atmosphere::Atmosphere atm_;
  reflection::ReflectionParams params_;
  McptConfig config_;
  PhaseSampler sampler_;
  Vec3 e_, e1_, e2_, h_;
  double cos_bt_, cos_br_, ks_, ke_;
};

PhotonTrace trace_photon(PhotonStream& rng, const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                         const atmosphere::Atmosphere& atm, const reflection::ReflectionParams& params,
                         const McptConfig& config = {});

struct McptResult {
  PathLossResult summary;
  double mean_q_r{0.0};
  double standard_error{0.0};
  double stderr_db{0.0};
  double q_r_sca{0.0};
  double q_r_ref{0.0};
  std::uint64_t n_photons{0};
  std::uint64_t n_contributing{0};
  double lower_bound_db{0.0};  ///< reported when nothing contributes
};

McptResult estimate_pathloss(const McptConfig& config, const geometry::Link& link, const geometry::Cuboid* box,
                             const atmosphere::Atmosphere& atm, const reflection::ReflectionParams& params,
                             double q_t);
McptResult estimate_pathloss(const McptConfig& config, const geometry::TransceiverGeometry& g,
                             const geometry::Obstacle* o, const atmosphere::Atmosphere& atm,
                             const reflection::ReflectionParams& params, double q_t);

}  // namespace uvnlos::mcpt
