// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "uvnlos/error.hpp"
#include "uvnlos/scattering.hpp"

using namespace uvnlos;
using namespace uvnlos::geometry;
using fixtures::kAtm;
using fixtures::kDeg;

TEST_CASE("kernel matches the two-leg expression") {
  const auto g = fixtures::validation_link(2, 100);
  const Link link = Link::from(g);
  const ScatterPoint p = scatter_point(link, 60.0, 0.1, -0.05);
  const Vec3 P = p.cartesian;
  const Vec3 R{0, 100, 0};
  const double d1 = norm(P), d2 = norm(R - P);
  const double mu = dot(P / d1, (R - P) / d2);
  const double cos_zeta = dot((P - R) / d2, link.rx_axis());
  const double ke = 1.39e-3, ks = 0.49e-3;
  const double omega = 2 * M_PI * (1 - std::cos(g.beta_t));
  // energy per unit volume at P times the fraction collected at R
  const double expect = (1.0 / (omega * d1 * d1)) * std::exp(-ke * d1) * ks * atmosphere::phase_function(kAtm, mu) *
                        std::exp(-ke * d2) * g.aperture_area * cos_zeta / (d2 * d2);
  const double kern = scattering::kernel(link, kAtm, p, 1.0) / jacobian_j3(p.tau, p.varpi);
  CHECK(kern == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("weighting factor") {
  const auto g = fixtures::validation_link(1, 100);
  const Link link = Link::from(g);
  const Obstacle wall = fixtures::validation_wall(100);
  const Cuboid box = Cuboid::from(wall);
  const Vec3 above_rx = Vec3{0, 100, 0} + link.rx_axis() * 30.0;
  CHECK(scattering::weighting_factor(link, nullptr, above_rx) == 1);
  CHECK(scattering::weighting_factor(link, nullptr, Vec3{above_rx.x, above_rx.y, -1.0}) == 0);
  CHECK(scattering::weighting_factor(link, nullptr, Vec3{0, 50, 1}) == 0);
  // behind the wall: both legs cross it
  const Vec3 behind{-40, 50, 20};
  CHECK(scattering::weighting_factor(link, &box, behind) == 0);
  CHECK(scattering::weighting_factor(g, &wall, to_beam_coordinates(link, above_rx)) == 1);
}

TEST_CASE("tau range truncation") {
  const auto g = fixtures::validation_link(1, 100);
  const Link link = Link::from(g);
  const Vec3 d = link.tx_axis();
  const Interval full = line_cone_interval({}, d, link.rx_cone(), 0.0, kInf);
  const Interval t = scattering::tau_range(link, d, 10.0);
  CHECK(t.lo == doctest::Approx(full.lo));
  if (std::isinf(full.hi)) {
    CHECK(t.hi == doctest::Approx(10.0 * (full.lo > 0 ? full.lo : 100.0)));
  } else {
    CHECK(t.hi == doctest::Approx(full.hi));
  }
}

TEST_CASE("free-space path loss against the polar-coordinate oracle") {
  // [DERIVED] tests/oracles/ssm_oracle.py: scenario 1 at (800, 1600, 64), scenario 2 at (400, 800, 64).
  const double oracle[2] = {98.734765, 98.617502};
  for (int sc : {1, 2}) {
    const auto r = scattering::integrate_scattering(fixtures::validation_link(sc, 100), nullptr, kAtm, 1.0);
    CHECK(r.status == Status::ok);
    CHECK(std::abs(r.pathloss_db - oracle[sc - 1]) < 0.02);
    CHECK(r.q_r == r.q_r_sca);
    CHECK(r.q_r_ref == 0.0);
  }
}

TEST_CASE("scattering with an obstacle against the oracle") {
  // [DERIVED] tests/oracles/ssm_oracle.py with a Liang-Barsky occlusion test.
  const auto g = fixtures::orientation_link(100);
  const Obstacle o = fixtures::orientation_block(100, 0.0);
  const auto r = scattering::integrate_scattering(g, &o, kAtm, 1.0);
  CHECK(r.model == "obstacle");
  CHECK(std::abs(r.pathloss_db - 106.181533) < 0.01);
}

TEST_CASE("grid refinement converges") {
  const Obstacle wall = fixtures::validation_wall(50);
  for (int sc : {1, 2}) {
    for (const Obstacle* o : {static_cast<const Obstacle*>(nullptr), &wall}) {
      const auto g = fixtures::validation_link(sc, o ? 50 : 100);
      double prev = NAN, prev_step = INFINITY;
      for (int n : {16, 32, 64, 128}) {
        scattering::ScatterIntegralConfig c;
        c.n_theta = c.n_varpi = c.n_tau = n;
        c.error_estimate = false;
        const double v = scattering::integrate_scattering(g, o, kAtm, 1.0, c).pathloss_db;
        if (!std::isnan(prev)) {
          const double step = std::abs(v - prev);
          CHECK(step <= prev_step + 1e-6);
          prev_step = step;
        }
        prev = v;
      }
      CHECK(prev_step < 1e-3);
    }
  }
}

TEST_CASE("zero-height obstacle equals no obstacle") {
  const auto g = fixtures::validation_link(1, 100);
  const double s = 10, w = 200;
  const Obstacle flat = obstacle_vertices(w, s, 0.0, x_o_max(w, s, 0) - s, 50, 0.0);
  const auto a = scattering::integrate_scattering(g, nullptr, kAtm, 1.0);
  const auto b = scattering::integrate_scattering(g, &flat, kAtm, 1.0);
  CHECK(std::abs(a.q_r - b.q_r) <= 1e-10 * a.q_r);
}

TEST_CASE("path loss does not depend on the source energy") {
  const auto g = fixtures::validation_link(2, 150);
  const auto a = scattering::integrate_scattering(g, nullptr, kAtm, 1.0);
  const auto b = scattering::integrate_scattering(g, nullptr, kAtm, 37.5);
  CHECK(a.pathloss_db == doctest::Approx(b.pathloss_db).epsilon(1e-12));
  CHECK(b.q_r == doctest::Approx(37.5 * a.q_r).epsilon(1e-12));
}

TEST_CASE("rotating the frame leaves the integral unchanged") {
  const auto g = fixtures::validation_link(1, 100);
  const Link link = Link::from(g);
  const Cuboid box = Cuboid::from(fixtures::validation_wall(100));
  const double base = scattering::integrate_scattering(link, &box, kAtm, 1.0).q_r;
  for (double turn : {0.4, -1.3, 2.9}) {
    const Cuboid turned = box.rotated_about_z(turn);
    const double q = scattering::integrate_scattering(link.rotated_about_z(turn), &turned, kAtm, 1.0).q_r;
    CHECK(q == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("thread count does not change the result") {
  const auto g = fixtures::validation_link(1, 100);
  scattering::ScatterIntegralConfig c1, c3;
  c1.threads = 1;
  c3.threads = 3;
  const double a = scattering::integrate_scattering(g, nullptr, kAtm, 1.0, c1).q_r;
  const double b = scattering::integrate_scattering(g, nullptr, kAtm, 1.0, c3).q_r;
  CHECK(a == b);
}

TEST_CASE("disjoint beams give an empty overlap") {
  const TransceiverGeometry g{3 * kDeg, 3 * kDeg, 10 * kDeg, 80 * kDeg, 179 * kDeg, -91 * kDeg, 100, 1.92e-4};
  const auto r = scattering::integrate_scattering(g, nullptr, kAtm, 1.0);
  CHECK(r.status == Status::empty_overlap);
  CHECK(std::isinf(r.pathloss_db));
  CHECK(r.q_r == 0.0);
}

TEST_CASE("config validation") {
  scattering::ScatterIntegralConfig c;
  c.n_tau = 0;
  CHECK_THROWS_AS(scattering::validate(c), DomainError);
  c = {};
  c.tau_truncation_factor = 1.0;
  CHECK_THROWS_AS(scattering::validate(c), DomainError);
}
