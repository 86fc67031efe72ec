// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "uvnlos/error.hpp"
#include "uvnlos/mcpt.hpp"
#include "uvnlos/scattering.hpp"

using namespace uvnlos;
using namespace uvnlos::geometry;
using namespace uvnlos::mcpt;
using fixtures::kAtm;
using fixtures::kDeg;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  static_assert(Philox4x32::generate({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5u);
}

TEST_CASE("photon streams are uniform and independent of order") {
  PhotonStream a(7, 123);
  double sum = 0.0, sumsq = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = a.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sumsq / n - 1.0 / 3.0) < 3e-3);
  PhotonStream b(7, 123), c(7, 124), d(8, 123);
  const double first = b.uniform();
  CHECK(first == PhotonStream(7, 123).uniform());
  CHECK(first != c.uniform());
  CHECK(first != d.uniform());
}

TEST_CASE("phase sampler reproduces the mean cosine") {
  const PhaseSampler s(kAtm);
  const auto rule = uvnlos::legendre_rule(200);
  double analytic = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    analytic += rule.weights[i] * 2 * M_PI * rule.nodes[i] * atmosphere::phase_function(kAtm, rule.nodes[i]);
  constexpr int n = 200000;
  double mean = 0.0;
  for (int k = 0; k < n; ++k) mean += s.sample_mu((k + 0.5) / n);
  mean /= n;
  CHECK(mean == doctest::Approx(analytic).epsilon(1e-3));
  CHECK(s.sample_mu(0.0) == -1.0);
  CHECK(s.sample_mu(1.0) == doctest::Approx(1.0));
  for (int k = 1; k < 100; ++k) CHECK(s.sample_mu(k / 100.0) >= s.sample_mu((k - 1) / 100.0));
}

TEST_CASE("rotate_into places the polar angle about the axis") {
  const Vec3 axis = normalized(Vec3{0.3, -0.5, 0.8});
  for (double c : {-0.9, 0.0, 0.4, 1.0}) {
    for (double phi : {0.0, 1.0, 4.0}) {
      const Vec3 v = rotate_into(axis, c, phi);
      CHECK(norm(v) == doctest::Approx(1.0));
      CHECK(dot(v, axis) == doctest::Approx(c));
    }
  }
  const Vec3 down = rotate_into({0, 0, -1}, 0.5, 0.3);
  CHECK(down.z == doctest::Approx(-0.5));
}

TEST_CASE("Phong sampling") {
  const Vec3 n{1, 0, 0};
  const Vec3 in = normalized(Vec3{-1, 0.5, 0.2});
  PhotonStream rng(3, 0);
  constexpr int count = 100000;
  double diffuse = 0.0, lobe = 0.0;
  const Vec3 mirror = in - n * (2.0 * dot(in, n));
  for (int k = 0; k < count; ++k) {
    const double u1 = rng.uniform(), u2 = rng.uniform();
    diffuse += dot(sample_phong_direction({0.1, 5.0, 1.0}, n, in, 0.0, u1, u2), n);
    lobe += dot(sample_phong_direction({0.1, 5.0, 0.0}, n, in, 0.5, u1, u2), mirror);
  }
  CHECK(diffuse / count == doctest::Approx(2.0 / 3.0).epsilon(5e-3));
  CHECK(lobe / count == doctest::Approx(6.0 / 7.0).epsilon(5e-3));
}

TEST_CASE("estimator agrees with the integral for scenario 2") {
  const auto g = fixtures::validation_link(2, 100);
  McptConfig c;
  c.n_photons = 2'000'000;
  const auto mc = estimate_pathloss(c, g, nullptr, kAtm, {}, 1.0);
  const double exact = scattering::integrate_scattering(g, nullptr, kAtm, 1.0).pathloss_db;
  CHECK(mc.summary.status == Status::ok);
  CHECK(std::abs(mc.summary.pathloss_db - exact) < std::max(0.3, 3.0 * mc.stderr_db));
  CHECK(mc.stderr_db < 0.2);
  CHECK(mc.q_r_ref == 0.0);
}

TEST_CASE("roulette does not bias the mean") {
  const auto g = fixtures::validation_link(2, 50);
  McptConfig a, b;
  a.n_photons = b.n_photons = 400'000;
  b.survival_threshold = 0.5;
  const auto ra = estimate_pathloss(a, g, nullptr, kAtm, {}, 1.0);
  const auto rb = estimate_pathloss(b, g, nullptr, kAtm, {}, 1.0);
  const double sigma = std::hypot(ra.standard_error, rb.standard_error);
  CHECK(std::abs(ra.mean_q_r - rb.mean_q_r) < 3.0 * sigma);
  CHECK(rb.standard_error > ra.standard_error);
}

TEST_CASE("thread count and block layout do not change the estimate") {
  const auto g = fixtures::validation_link(1, 100);
  const Obstacle wall = fixtures::validation_wall(100);
  McptConfig c1, c3;
  c1.n_photons = c3.n_photons = 300'000;
  c1.threads = 1;
  c3.threads = 3;
  c1.block_size = c3.block_size = 10'000;
  const auto a = estimate_pathloss(c1, g, &wall, kAtm, {}, 1.0);
  const auto b = estimate_pathloss(c3, g, &wall, kAtm, {}, 1.0);
  CHECK(a.mean_q_r == b.mean_q_r);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.q_r_ref > 0.0);
}

TEST_CASE("reflection estimate against the face integral") {
  const auto g = fixtures::orientation_link(100);
  const Obstacle o = fixtures::orientation_block(100, 0.0);
  McptConfig c;
  c.n_photons = 1'000'000;
  const auto mc = estimate_pathloss(c, g, &o, kAtm, {}, 1.0);
  const double ref = reflection::integrate_reflection(g, o, kAtm, {}, 1.0).q_r;
  CHECK(mc.q_r_ref == doctest::Approx(ref).epsilon(0.05));
}

TEST_CASE("single photon events") {
  const Link link = Link::from(fixtures::validation_link(1, 100));
  const PhotonTracer tracer(link, nullptr, kAtm, {}, {});
  int ground = 0, scattered = 0;
  for (std::uint64_t id = 0; id < 5000; ++id) {
    PhotonStream rng(1, id);
    const PhotonTrace t = tracer.trace(rng);
    CHECK(norm(t.emitted) == doctest::Approx(1.0));
    CHECK(dot(t.emitted, link.tx_axis()) >= std::cos(link.beta_t) - 1e-12);
    CHECK((t.event == PhotonEvent::ground) == (t.emitted.z < 0.0));
    ground += t.event == PhotonEvent::ground;
    scattered += t.event == PhotonEvent::scattered;
    if (t.event == PhotonEvent::scattered) CHECK(t.collision.z > 0.0);
    CHECK(t.contribution >= 0.0);
  }
  CHECK(ground > 0);
  CHECK(scattered > 0);
}

TEST_CASE("invalid configurations and silent links") {
  const auto g = fixtures::validation_link(1, 100);
  McptConfig c;
  c.collision_order = 2;
  CHECK_THROWS_AS(estimate_pathloss(c, g, nullptr, kAtm, {}, 1.0), DomainError);
  c = {};
  c.n_photons = 1;
  CHECK_THROWS_AS(validate(c), DomainError);

  const TransceiverGeometry apart{3 * kDeg, 3 * kDeg, 10 * kDeg, 80 * kDeg, 179 * kDeg, -91 * kDeg, 100, 1.92e-4};
  McptConfig small;
  small.n_photons = 20'000;
  const auto r = estimate_pathloss(small, apart, nullptr, kAtm, {}, 1.0);
  CHECK(r.summary.status == Status::zero_contribution);
  CHECK(r.summary.diagnostics.count("pathloss_lower_bound_db") == 1);
  CHECK(r.lower_bound_db == doctest::Approx(10.0 * std::log10(20000.0 / 3.0)));
}
