// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "uvnlos/error.hpp"
#include "uvnlos/quadrature.hpp"
#include "uvnlos/reflection.hpp"

using namespace uvnlos;
using namespace uvnlos::geometry;
using namespace uvnlos::reflection;
using fixtures::kAtm;
using fixtures::kDeg;

TEST_CASE("Phong lobe normalisation") {
  const ReflectionParams p{0.1, 5.0, 0.5};
  // hemisphere integral about the normal, incidence along the normal
  const auto rt = uvnlos::legendre_rule(200);
  double diffuse = 0.0, specular = 0.0;
  for (size_t i = 0; i < rt.nodes.size(); ++i) {
    const double c = 0.5 * (rt.nodes[i] + 1.0);
    const double w = 0.5 * rt.weights[i] * 2 * M_PI;
    diffuse += w * phong_intensity({0.1, 5.0, 1.0}, c, -1.0);
    specular += w * phong_intensity({0.1, 5.0, 0.0}, 0.0, c);
  }
  CHECK(diffuse == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(specular == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phong_intensity(p, 0.3, -0.2) == doctest::Approx(0.5 * 0.3 / M_PI));
  CHECK(phong_intensity(p, -0.3, -0.2) == 0.0);
}

TEST_CASE("active surfaces and outward normals") {
  for (double a : {-5.0, 0.0, 5.0}) {
    const Obstacle o = fixtures::orientation_block(100, a * kDeg);
    const auto surfaces = reflection_surfaces(o);
    CHECK(surfaces.size() == (a == 0.0 ? 1u : 2u));
    CHECK(surfaces[0].label == SurfaceLabel::cdd_c);
    if (a < 0) CHECK(surfaces[1].label == SurfaceLabel::daa_d);
    if (a > 0) CHECK(surfaces[1].label == SurfaceLabel::bcc_b);
    const Vec3 centre{o.x_o, o.y_o, 0.0};
    for (const auto& s : surfaces) {
      const Vec3 mid = (s.m + s.n) * 0.5;
      CHECK(dot(s.normal, mid - centre) > 0.0);
      CHECK(norm(s.normal) == doctest::Approx(1.0));
      CHECK(std::abs(dot(s.normal, s.n - s.m)) < 1e-9);
      CHECK(s.height == doctest::Approx(80.0));
    }
    CHECK(surfaces[0].edge_length() == doctest::Approx(40.0));
    const auto from_box = reflection_surfaces(Cuboid::from(o));
    REQUIRE(from_box.size() == surfaces.size());
    for (size_t i = 0; i < surfaces.size(); ++i) CHECK(norm(from_box[i].normal - surfaces[i].normal) < 1e-12);
  }
  CHECK(to_string(SurfaceLabel::daa_d) == "DAA'D'");
}

TEST_CASE("front-face visibility oracle") {
  // On a face of a convex box, both legs are clear iff T and R lie on its outer side.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int lit = 0;
  for (double a : {-5.0, 0.0, 5.0}) {
    const auto g = fixtures::orientation_link(100);
    const Link link = Link::from(g);
    const Obstacle o = fixtures::orientation_block(100, a * kDeg);
    const Cuboid box = Cuboid::from(o);
    for (const auto& s : reflection_surfaces(o)) {
      for (int t = 0; t < 20000; ++t) {
        const Vec3 p = s.point(u(rng), s.height * u(rng));
        const bool oracle = link.tx_cone().contains(p) && link.rx_cone().contains(p) &&
                            dot(s.normal, Vec3{} - p) > 0.0 && dot(s.normal, link.receiver - p) > 0.0;
        CHECK(reflection_weight(link, box, s, p) == static_cast<int>(oracle));
        lit += oracle;
      }
    }
  }
  CHECK(lit > 1000);
}

TEST_CASE("reflection integral against the face-grid oracle") {
  // [DERIVED] tests/oracles/ssm_oracle.py: 1600 x 1600 Gauss grid on the front face.
  const auto g = fixtures::orientation_link(100);
  const Obstacle o = fixtures::orientation_block(100, 0.0);
  const auto ref = integrate_reflection(g, o, kAtm, ReflectionParams{}, 1.0);
  CHECK(ref.model == "reflection");
  CHECK(std::abs(ref.pathloss_db - 91.692630) < 0.01);
  const auto tot = total_pathloss(g, &o, kAtm, ReflectionParams{}, 1.0);
  CHECK(tot.diagnostics.at("ref_over_sca") == doctest::Approx(28.111902).epsilon(2e-3));
  CHECK(tot.q_r == doctest::Approx(tot.q_r_sca + tot.q_r_ref));
}

TEST_CASE("side faces receive nothing when T and R are on opposite sides") {
  const auto g = fixtures::orientation_link(100);
  const auto neg = integrate_reflection(g, fixtures::orientation_block(100, -5 * kDeg), kAtm, {}, 1.0);
  const auto pos = integrate_reflection(g, fixtures::orientation_block(100, 5 * kDeg), kAtm, {}, 1.0);
  CHECK(neg.diagnostics.at("q_r_DAA'D'") == 0.0);
  CHECK(pos.diagnostics.at("q_r_BCC'B'") == 0.0);
  CHECK(neg.diagnostics.at("q_r_CDD'C'") > 0.0);
}

TEST_CASE("reflection grid refinement") {
  const auto g = fixtures::orientation_link(100);
  const Obstacle o = fixtures::orientation_block(100, 5 * kDeg);
  double prev = NAN;
  double last_step = INFINITY;
  for (int n : {16, 32, 64, 128}) {
    ReflectionGridConfig c;
    c.n_u = c.n_z = n;
    const double v = integrate_reflection(g, o, kAtm, {}, 1.0, c).pathloss_db;
    if (!std::isnan(prev)) {
      CHECK(std::abs(v - prev) <= last_step + 1e-6);
      last_step = std::abs(v - prev);
    }
    prev = v;
  }
  CHECK(last_step < 1e-3);
}

TEST_CASE("reflection is frame invariant and scales with r_r") {
  const auto g = fixtures::orientation_link(100);
  const Link link = Link::from(g);
  const Cuboid box = Cuboid::from(fixtures::orientation_block(100, 5 * kDeg));
  const double base = integrate_reflection(link, box, kAtm, {}, 1.0).q_r;
  const double turned = integrate_reflection(link.rotated_about_z(1.1), box.rotated_about_z(1.1), kAtm, {}, 1.0).q_r;
  CHECK(turned == doctest::Approx(base).epsilon(1e-9));
  const double doubled = integrate_reflection(link, box, kAtm, {0.2, 5.0, 0.5}, 1.0).q_r;
  CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(ReflectionParams{1.5, 5.0, 0.5}), DomainError);
  CHECK_THROWS_AS(validate(ReflectionParams{0.1, -1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(validate(ReflectionParams{0.1, 5.0, 2.0}), DomainError);
}
