#include <meshcert/geometry.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace meshcert;

TEST_CASE("simplex volume: closed forms") {
  CHECK(simplex_volume(oracles::unit_right_triangle()) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(simplex_volume(oracles::equilateral_triangle()) ==
        doctest::Approx(0.433013).epsilon(1e-6));
  CHECK(simplex_volume(oracles::regular_tetrahedron()) ==
        doctest::Approx(0.117851).epsilon(1e-6));
}

TEST_CASE("simplex volume: zero iff affinely dependent") {
  Vec a(2), b(2), c(2);
  a << 0, 0;
  b << 1, 1;
  c << 2, 2;
  CHECK(simplex_volume({a, b, c}) == doctest::Approx(0.0));
  CHECK(simplex_degenerate({a, b, c}));
  CHECK_FALSE(simplex_degenerate(oracles::unit_right_triangle()));
}

TEST_CASE("simplex volume: dimension mismatch rejected") {
  Vec a(2), b(3);
  a << 0, 0;
  b << 1, 0, 0;
  CHECK_THROWS_AS(simplex_volume({a, b, a}), std::invalid_argument);
}

TEST_CASE("facet normal and volume") {
  SUBCASE("right triangle, facet opposite the right angle is the hypotenuse") {
    auto [n, vol] = facet_normal_and_volume(oracles::unit_right_triangle(), 0);
    CHECK(vol == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    // Orthogonal to the hypotenuse direction, outward from the origin.
    Vec edge(2);
    edge << -1, 1;
    CHECK(std::abs(n.dot(edge)) < 1e-12);
    CHECK(n.sum() > 0);
  }
  SUBCASE("unit right tetrahedron, facet opposite the origin") {
    auto [n, vol] = facet_normal_and_volume(oracles::unit_right_simplex(3), 0);
    CHECK(vol == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    CHECK(std::abs(n.norm() - vol) < 1e-12);
  }
  SUBCASE("normals are orthogonal to every facet edge") {
    auto pts = oracles::random_points(4, 5, 77);
    for (int r = 0; r < 5; ++r) {
      auto [n, vol] = facet_normal_and_volume(pts, r);
      std::vector<Vec> facet;
      for (int i = 0; i < 5; ++i)
        if (i != r) facet.push_back(pts[static_cast<size_t>(i)]);
      for (size_t i = 0; i < facet.size(); ++i)
        for (size_t j = i + 1; j < facet.size(); ++j)
          CHECK(std::abs(n.dot(facet[i] - facet[j])) < 1e-9 * n.norm());
      CHECK(vol > 0);
    }
  }
  SUBCASE("closure: outward normals sum to zero") {
    for (int d = 1; d <= 5; ++d) {
      auto pts = oracles::random_points(d, d + 1, 1000 + static_cast<std::uint64_t>(d));
      Vec sum = Vec::Zero(d);
      double max_facet = 0.0;
      for (int r = 0; r <= d; ++r) {
        auto [n, vol] = facet_normal_and_volume(pts, r);
        sum += n;
        max_facet = std::max(max_facet, vol);
      }
      CHECK(sum.norm() < 1e-9 * max_facet);
    }
  }
  SUBCASE("degenerate simplex flagged by zero vector") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 2, 0;
    auto [n, vol] = facet_normal_and_volume({a, b, c}, 0);
    CHECK(n.norm() == 0.0);
    CHECK(vol == 0.0);
  }
}

TEST_CASE("elevation: closed forms and projection oracle") {
  CHECK(elevation(oracles::equilateral_triangle(), 0) ==
        doctest::Approx(0.866025).epsilon(1e-6));
  CHECK(elevation(oracles::unit_right_triangle(), 0) ==
        doctest::Approx(0.707107).epsilon(1e-6));
  for (int s = 0; s < 4; ++s)
    CHECK(elevation(oracles::regular_tetrahedron(), s) ==
          doctest::Approx(0.816497).epsilon(1e-6));

  // Identity route agrees with direct projection.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (int d = 2; d <= 5; ++d) {
      auto pts = oracles::random_points(d, d + 1, 400 + seed * 7 + static_cast<std::uint64_t>(d));
      for (int s = 0; s <= d; ++s) {
        std::vector<Vec> facet;
        for (int i = 0; i <= d; ++i)
          if (i != s) facet.push_back(pts[static_cast<size_t>(i)]);
        const double direct = oracles::projection_distance(pts[static_cast<size_t>(s)], facet);
        CHECK(elevation(pts, s) == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("elevation * facet volume = d * volume, per vertex") {
  for (int d = 1; d <= 5; ++d) {
    auto pts = oracles::random_points(d, d + 1, 90 + static_cast<std::uint64_t>(d));
    const double vol = simplex_volume(pts);
    for (int s = 0; s <= d; ++s) {
      const double facet = facet_normal_and_volume(pts, s).second;
      CHECK(elevation(pts, s) * facet == doctest::Approx(d * vol).epsilon(1e-9));
    }
  }
}

TEST_CASE("thickness: closed forms, slivers, invariance") {
  CHECK(analyze_simplex(oracles::equilateral_triangle()).thickness ==
        doctest::Approx(0.433013).epsilon(1e-6));
  CHECK(analyze_simplex(oracles::unit_right_triangle()).thickness ==
        doctest::Approx(0.25).epsilon(1e-12));

  SUBCASE("near-sliver triangle") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 0.5, 1e-6;
    const auto g = analyze_simplex({a, b, c});
    CHECK(g.thickness < 1e-5);
    CHECK(g.thickness > 0);
  }

  SUBCASE("degenerate simplex: thickness 0 with flag") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 2, 0;
    const auto g = analyze_simplex({a, b, c});
    CHECK(g.degenerate);
    CHECK(thickness(g) == 0.0);
  }

  SUBCASE("invariant under rigid motion and uniform scaling") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      auto pts = oracles::random_points(d, d + 1, rng());
      const double before = analyze_simplex(pts).thickness;
      const Mat rot = oracles::random_rotation(d, rng());
      const double scale = 0.3 + 2.0 * std::generate_canonical<double, 53>(rng);
      Vec shift(d);
      for (int j = 0; j < d; ++j) shift(j) = std::generate_canonical<double, 53>(rng);
      std::vector<Vec> moved;
      for (const Vec& p : pts) moved.push_back(scale * (rot * p) + shift);
      CHECK(analyze_simplex(moved).thickness == doctest::Approx(before).epsilon(1e-10));
    }
  }
}

TEST_CASE("circumsphere: closed forms and equidistance") {
  SUBCASE("right triangle") {
    const Ball b = circumsphere(oracles::unit_right_triangle());
    CHECK(b.center(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.center(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.radius == doctest::Approx(0.707107).epsilon(1e-6));
  }
  SUBCASE("equilateral triangle") {
    CHECK(circumsphere(oracles::equilateral_triangle()).radius ==
          doctest::Approx(0.577350).epsilon(1e-6));
  }
  SUBCASE("regular tetrahedron") {
    CHECK(circumsphere(oracles::regular_tetrahedron()).radius ==
          doctest::Approx(0.612372).epsilon(1e-6));
  }
  SUBCASE("vertices equidistant from the center") {
    for (int d = 2; d <= 5; ++d) {
      auto pts = oracles::random_points(d, d + 1, 321 + static_cast<std::uint64_t>(d));
      const Ball b = circumsphere(pts);
      for (const Vec& p : pts)
        CHECK((p - b.center).norm() == doctest::Approx(b.radius).epsilon(1e-10));
    }
  }
  SUBCASE("degenerate simplex rejected") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 2, 0;
    CHECK_THROWS_AS(circumsphere({a, b, c}), std::domain_error);
  }
}

TEST_CASE("min containment ball") {
  SUBCASE("right triangle: spans the hypotenuse") {
    const Ball b = min_containment_ball(oracles::unit_right_triangle());
    CHECK(b.radius == doctest::Approx(0.707107).epsilon(1e-6));
    CHECK(b.center(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(b.center(1) == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("obtuse triangle: spans the long edge") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 0.5, 0.1;
    const Ball ball = min_containment_ball({a, b, c});
    CHECK(ball.radius == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ball.center(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ball.center(1) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("single point") {
    Vec a(3);
    a << 1, 2, 3;
    const Ball b = min_containment_ball({a});
    CHECK(b.radius == 0.0);
    CHECK((b.center - a).norm() == 0.0);
  }
  SUBCASE("matches descent oracle on random simplices and larger sets") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 12; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      const int n = (trial < 6) ? d + 1 : d + 5 + static_cast<int>(rng() % 10);
      auto pts = oracles::random_points(d, n, rng());
      const Ball got = min_containment_ball(pts);
      const Ball ref = oracles::descent_min_ball(pts);
      CHECK(got.radius <= ref.radius * (1.0 + 1e-6));
      // Covers all points.
      for (const Vec& p : pts)
        CHECK((p - got.center).norm() <= got.radius * (1.0 + 1e-10) + 1e-12);
    }
  }
  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(min_containment_ball({}), std::invalid_argument);
  }
}

TEST_CASE("mcc radius <= circumradius; equality when circumcenter inside") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto pts = oracles::random_points(d, d + 1, rng());
    const auto g = analyze_simplex(pts);
    if (g.degenerate) continue;
    CHECK(g.mcc_radius <= g.circumradius * (1.0 + 1e-10));
  }
  // Equilateral triangle: circumcenter inside, so the two coincide.
  const auto g = analyze_simplex(oracles::equilateral_triangle());
  CHECK(g.mcc_radius == doctest::Approx(g.circumradius).epsilon(1e-9));
}
