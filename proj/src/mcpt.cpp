// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/mcpt.hpp"

#include <algorithm>
#include <cmath>

#include "uvnlos/detail/parallel.hpp"
#include "uvnlos/error.hpp"

namespace uvnlos::mcpt {

using geometry::Cuboid;
using geometry::Link;

namespace {

constexpr double kPi = geometry::kPi;

// Orthonormal pair perpendicular to unit n (Duff et al. 2017).
void basis(const Vec3& n, Vec3& b1, Vec3& b2) {
  const double sign = std::copysign(1.0, n.z);
  const double a = -1.0 / (sign + n.z);
  const double b = n.x * n.y * a;
  b1 = {1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x};
  b2 = {b, sign + n.y * n.y * a, -n.y};
}

reflection::SurfaceLabel label_of(geometry::BoxFace f, bool& ok) {
  ok = true;
  switch (f) {
    case geometry::BoxFace::front_cd: return reflection::SurfaceLabel::cdd_c;
    case geometry::BoxFace::side_da: return reflection::SurfaceLabel::daa_d;
    case geometry::BoxFace::side_bc: return reflection::SurfaceLabel::bcc_b;
    default: ok = false; return reflection::SurfaceLabel::cdd_c;
  }
}

}  // namespace

void validate(const McptConfig& c) {
  if (c.n_photons < 2) throw DomainError("n_photons", "must be at least 2");
  if (!(c.survival_threshold >= 0.0)) throw DomainError("survival_threshold", "must be non-negative");
  if (c.collision_order != 1) throw DomainError("collision_order", "only single scattering is supported");
  if (c.block_size < 1) throw DomainError("block_size", "must be positive");
}

PhaseSampler::PhaseSampler(const atmosphere::Atmosphere& atm, int bins) {
  if (bins < 2) throw DomainError("bins", "must be at least 2");
  cdf_.assign(static_cast<size_t>(bins) + 1, 0.0);
  const double h = 2.0 / bins;
  constexpr int kSub = 8;
  for (int k = 0; k < bins; ++k) {
    const double a = -1.0 + k * h;
    double s = 0.0;
    for (int m = 0; m <= kSub; ++m) {
      const double w = (m == 0 || m == kSub) ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
      s += w * atmosphere::phase_function(atm, std::min(1.0, a + m * h / kSub));
    }
    cdf_[k + 1] = cdf_[k] + 2.0 * kPi * s * h / (3.0 * kSub);
  }
  const double total = cdf_.back();
  for (double& v : cdf_) v /= total;
}

double PhaseSampler::sample_mu(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const int k = std::clamp(static_cast<int>(it - cdf_.begin()) - 1, 0, bins() - 1);
  const double span = cdf_[k + 1] - cdf_[k];
  const double frac = span > 0.0 ? (u - cdf_[k]) / span : 0.5;
  return std::clamp(-1.0 + (k + std::clamp(frac, 0.0, 1.0)) * 2.0 / bins(), -1.0, 1.0);
}

Vec3 rotate_into(const Vec3& axis, double cos_theta, double phi) {
  Vec3 b1, b2;
  basis(axis, b1, b2);
  const double st = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  return b1 * (st * std::cos(phi)) + b2 * (st * std::sin(phi)) + axis * cos_theta;
}

Vec3 sample_phong_direction(const reflection::ReflectionParams& p, const Vec3& normal, const Vec3& incident,
                            double u_branch, double u1, double u2) {
  if (u_branch < p.eta) return rotate_into(normal, std::sqrt(u1), 2.0 * kPi * u2);
  const Vec3 mirror = incident - normal * (2.0 * dot(incident, normal));
  return rotate_into(mirror, std::pow(u1, 1.0 / (p.m_s + 1.0)), 2.0 * kPi * u2);
}

PhotonTracer::PhotonTracer(const Link& link, const Cuboid* box, const atmosphere::Atmosphere& atm,
                           const reflection::ReflectionParams& params, const McptConfig& config)
    : link_(link), atm_(atm), params_(params), config_(config), sampler_(atm) {
  validate(config);
  atmosphere::validate(atm);
  reflection::validate(params);
  if (box != nullptr && box->height > 0.0) {
    box_ = *box;
    surfaces_ = reflection::reflection_surfaces(*box);
  }
  e_ = link.tx_axis();
  basis(e_, e1_, e2_);
  h_ = link.rx_axis();
  cos_bt_ = std::cos(link.beta_t);
  cos_br_ = std::cos(link.beta_r);
  const auto ext = atmosphere::extinction(atm);
  ks_ = atmosphere::per_metre(ext.ks);
  ke_ = atmosphere::per_metre(ext.ke);
}

bool PhotonTracer::sees_receiver(const Vec3& p, double& cos_v, double& eps, Vec3& to_r) const {
  to_r = link_.receiver - p;
  eps = norm(to_r);
  if (eps == 0.0) return false;
  to_r = to_r / eps;
  cos_v = -dot(to_r, h_);
  if (cos_v < cos_br_) return false;
  return !(box_ && geometry::segment_occluded(p, link_.receiver, *box_));
}

PhotonTrace PhotonTracer::trace(PhotonStream& rng) const {
  PhotonTrace t;
  const double ct = 1.0 - rng.uniform() * (1.0 - cos_bt_);
  const double phi = 2.0 * kPi * rng.uniform();
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const Vec3 d = e1_ * (st * std::cos(phi)) + e2_ * (st * std::sin(phi)) + e_ * ct;
  t.emitted = d;
  if (d.z < 0.0) {
    t.event = PhotonEvent::ground;
    return t;
  }
  const double ell = -std::log(1.0 - rng.uniform()) / ke_;

  auto roulette = [&](double w) {
    if (w >= config_.survival_threshold) return w;
    return rng.uniform() < 0.1 ? w * 10.0 : 0.0;
  };

  geometry::BoxHit hit;
  if (box_) hit = geometry::ray_box_entry({}, d, *box_);
  if (hit.t < ell) {
    const Vec3 u = d * hit.t;
    t.collision = u;
    bool ok = false;
    const reflection::SurfaceLabel label = label_of(hit.face, ok);
    const reflection::ReflectionSurface* surf = nullptr;
    if (ok)
      for (const auto& s : surfaces_)
        if (s.label == label) surf = &s;
    if (surf == nullptr || !config_.enable_reflection) {
      t.event = PhotonEvent::absorbed;
      return t;
    }
    t.reflected = true;
    t.weight = roulette(params_.r_r);
    if (t.weight == 0.0) {
      t.event = PhotonEvent::roulette_killed;
      return t;
    }
    double cos_v = 0.0, eps = 0.0;
    Vec3 to_r;
    const reflection::ReflectionAngles a = reflection::reflection_angles(link_, *surf, u);
    if (a.cos_theta1 > 0.0 && sees_receiver(u, cos_v, eps, to_r)) {
      t.contribution = t.weight * reflection::phong_intensity(params_, a.cos_theta1, a.cos_theta2) *
                       link_.aperture_area * cos_v * std::exp(-ke_ * eps) / (eps * eps);
    }
    const double ub = rng.uniform(), u1 = rng.uniform(), u2 = rng.uniform();
    t.outgoing = sample_phong_direction(params_, surf->normal, d, ub, u1, u2);
    t.event = PhotonEvent::reflected;
    return t;
  }

  const Vec3 p = d * ell;
  t.collision = p;
  t.weight = roulette(ks_ / ke_);
  if (t.weight == 0.0) {
    t.event = PhotonEvent::roulette_killed;
    return t;
  }
  double cos_v = 0.0, eps = 0.0;
  Vec3 to_r;
  if (sees_receiver(p, cos_v, eps, to_r)) {
    t.contribution = t.weight * atmosphere::phase_function(atm_, dot(d, to_r)) * link_.aperture_area * cos_v *
                     std::exp(-ke_ * eps) / (eps * eps);
  }
  const double mu = sampler_.sample_mu(rng.uniform());
  t.outgoing = rotate_into(d, mu, 2.0 * kPi * rng.uniform());
  t.event = PhotonEvent::scattered;
  return t;
}

PhotonTrace trace_photon(PhotonStream& rng, const geometry::TransceiverGeometry& g, const geometry::Obstacle* o,
                         const atmosphere::Atmosphere& atm, const reflection::ReflectionParams& params,
                         const McptConfig& config) {
  const Link link = Link::from(g);
  if (o == nullptr) return PhotonTracer(link, nullptr, atm, params, config).trace(rng);
  const Cuboid box = Cuboid::from(*o);
  return PhotonTracer(link, &box, atm, params, config).trace(rng);
}

namespace {
struct BlockSums {
  double sum{0.0};
  double sumsq{0.0};
  double sca{0.0};
  double ref{0.0};
  std::uint64_t hits{0};
};
}  // namespace

McptResult estimate_pathloss(const McptConfig& config, const Link& link, const Cuboid* box,
                             const atmosphere::Atmosphere& atm, const reflection::ReflectionParams& params,
                             double q_t) {
  validate(config);
  if (!(q_t > 0.0)) throw DomainError("q_t", "source energy must be positive");
  const PhotonTracer tracer(link, box, atm, params, config);
  const std::uint64_t n = config.n_photons;
  const std::uint64_t bs = config.block_size;
  const auto nblocks = static_cast<int>((n + bs - 1) / bs);
  const auto blocks = detail::parallel_map<BlockSums>(nblocks, config.threads, [&](int b) {
    BlockSums s;
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * bs;
    const std::uint64_t end = std::min(n, begin + bs);
    for (std::uint64_t id = begin; id < end; ++id) {
      PhotonStream rng(config.rng_seed, id);
      const PhotonTrace t = tracer.trace(rng);
      const double c = t.contribution;
      if (c > 0.0) {
        s.sum += c;
        s.sumsq += c * c;
        (t.reflected ? s.ref : s.sca) += c;
        ++s.hits;
      }
    }
    return s;
  });
  BlockSums tot;
  for (const BlockSums& s : blocks) {
    tot.sum += s.sum;
    tot.sumsq += s.sumsq;
    tot.sca += s.sca;
    tot.ref += s.ref;
    tot.hits += s.hits;
  }
  const double nn = static_cast<double>(n);
  const double mean = tot.sum / nn;
  const double var = std::max(0.0, (tot.sumsq / nn - mean * mean) * nn / (nn - 1.0));

  McptResult r;
  r.n_photons = n;
  r.n_contributing = tot.hits;
  r.mean_q_r = q_t * mean;
  r.standard_error = q_t * std::sqrt(var / nn);
  r.q_r_sca = q_t * tot.sca / nn;
  r.q_r_ref = q_t * tot.ref / nn;
  r.stderr_db = mean > 0.0 ? 10.0 / std::log(10.0) * r.standard_error / r.mean_q_r : 0.0;
  r.lower_bound_db = 10.0 * std::log10(nn / 3.0);
  PathLossResult& s = r.summary;
  s.model = "mcpt";
  s.q_t = q_t;
  s.q_r_sca = r.q_r_sca;
  s.q_r_ref = r.q_r_ref;
  s.q_r = r.mean_q_r;
  s.pathloss_db = pathloss_db(q_t, r.mean_q_r);
  s.error_estimate_db = r.stderr_db;
  s.status = tot.hits > 0 ? Status::ok : Status::zero_contribution;
  s.diagnostics["stderr_db"] = r.stderr_db;
  s.diagnostics["n_photons"] = nn;
  s.diagnostics["n_contributing"] = static_cast<double>(tot.hits);
  if (tot.hits == 0) s.diagnostics["pathloss_lower_bound_db"] = r.lower_bound_db;
  return r;
}

McptResult estimate_pathloss(const McptConfig& config, const geometry::TransceiverGeometry& g,
                             const geometry::Obstacle* o, const atmosphere::Atmosphere& atm,
                             const reflection::ReflectionParams& params, double q_t) {
  geometry::validate(g, geometry::ElevationBounds::relaxed);
  const Link link = Link::from(g);
  if (o == nullptr) return estimate_pathloss(config, link, nullptr, atm, params, q_t);
  const Cuboid box = Cuboid::from(*o);
  return estimate_pathloss(config, link, &box, atm, params, q_t);
}

}  // namespace uvnlos::mcpt
