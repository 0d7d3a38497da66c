#include <meshcert/functionals.hpp>

#include <meshcert/fields.hpp>
#include <meshcert/mesh_io.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>

using namespace meshcert;

namespace {

Mesh unit_square_mesh() {
  Mesh m;
  m.dim = 2;
  m.points = oracles::square_corners();
  m.simplices = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

ElementVectorFn const_field(double x, double y) {
  Vec c(2);
  c << x, y;
  return [c](int, const Vec&) { return c; };
}

}  // namespace

TEST_CASE("roughness functional: hand values on the equilateral triangle") {
  const Mesh m = oracles::single_simplex_mesh(oracles::equilateral_triangle());
  const auto quad = simplex_quadrature(2, 4);
  SUBCASE("zero field") {
    CHECK(roughness_functional(m, const_field(0, 0), quad) == 0.0);
  }
  SUBCASE("field (1,0): edge x-components {1, 1/2, 1/2}") {
    CHECK(roughness_functional(m, const_field(1, 0), quad) ==
          doctest::Approx(0.805927).epsilon(1e-6));
  }
  SUBCASE("Monte Carlo oracle on a random mesh, random smooth field") {
    const Mesh mesh = delaunay(oracles::random_points(2, 25, 3));
    const VectorField f = random_trig_vector(2, 19);
    const double got =
        roughness_functional(mesh, ambient_field(f.value), simplex_quadrature(2, 12));
    // 10^6-sample Monte Carlo of the Psi^2 integrand.
    std::vector<std::pair<Mat, double>> elem;  // abs edges, 1/diam^2
    for (size_t k = 0; k < mesh.simplices.size(); ++k) {
      const auto verts = mesh.simplex_points(static_cast<int>(k));
      Mat edges(3, 2);
      int row = 0;
      for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
          edges.row(row++) = (verts[j] - verts[i]).cwiseAbs().transpose();
      const double diam = simplex_diameter(verts);
      elem.emplace_back(edges, 1.0 / (diam * diam));
    }
    const double mc_sq = oracles::mc_integrate(
        mesh,
        [&](int k, const Vec& x) {
          const auto& [edges, inv_diam2] = elem[static_cast<size_t>(k)];
          return inv_diam2 * (edges * f.value(x).cwiseAbs()).squaredNorm();
        },
        1000000, 5);
    CHECK(got == doctest::Approx(std::sqrt(mc_sq)).epsilon(2e-3));
  }
}

TEST_CASE("gradient norm and edge functional") {
  const Mesh m = oracles::single_simplex_mesh(oracles::equilateral_triangle());
  const auto quad = simplex_quadrature(2, 4);
  CHECK(gradient_norm(m, const_field(1, 0), quad) ==
        doctest::Approx(0.658037).epsilon(1e-6));
  CHECK(gradient_norm(m, const_field(0, 0), quad) == 0.0);

  // Edge functional is the same formula.
  CHECK(edge_functional(m, const_field(1, 0), quad) ==
        doctest::Approx(0.805927).epsilon(1e-6));
  const ScalarField v = scalar_field("trig", 2);
  const Mesh mesh = coxeter_a_tilde(2, 1, 1.0);
  const auto w = ambient_field(v.gradient);
  CHECK(edge_functional(mesh, w, quad) ==
        doctest::Approx(roughness_functional(mesh, w, quad)).epsilon(1e-12));

  // ||x|| over the unit square.
  const Mesh sq = unit_square_mesh();
  const auto identity = ambient_field([](const Vec& x) { return x; });
  CHECK(gradient_norm(sq, identity, quad) == doctest::Approx(0.816497).epsilon(1e-6));
}

TEST_CASE("rajan theta") {
  CHECK(rajan_theta(oracles::single_simplex_mesh(oracles::unit_right_triangle())).first ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rajan_theta(oracles::single_simplex_mesh(oracles::equilateral_triangle())).first ==
        doctest::Approx(1.299038).epsilon(1e-6));
  CHECK(rajan_theta(oracles::single_simplex_mesh(oracles::unit_right_triangle())).second ==
        doctest::Approx(0.166667).epsilon(1e-6));

  SUBCASE("additive over disjoint unions") {
    const Mesh a = unit_square_mesh();
    Mesh b = unit_square_mesh();
    for (auto& p : b.points) p.array() += 5.0;
    Mesh both = a;
    const int offset = static_cast<int>(a.points.size());
    for (const auto& p : b.points) both.points.push_back(p);
    for (auto s : b.simplices) {
      for (auto& id : s) id += offset;
      both.simplices.push_back(s);
    }
    CHECK(rajan_theta(both).first ==
          doctest::Approx(rajan_theta(a).first + rajan_theta(b).first).epsilon(1e-12));
  }
}

TEST_CASE("constants C1 and C2") {
  const Mesh eq = oracles::single_simplex_mesh(oracles::equilateral_triangle());
  const Mesh rt = oracles::single_simplex_mesh(oracles::unit_right_triangle());
  CHECK(constant_c1(eq) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(constant_c1(rt) == doctest::Approx(0.433013).epsilon(1e-6));
  CHECK(constant_c2(eq) == doctest::Approx(1.732051).epsilon(1e-6));
  CHECK(constant_c2(rt) == doctest::Approx(1.414214).epsilon(1e-6));

  SUBCASE("C1 = sqrt(d(d+1)/2) * min thickness") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const Mesh m = delaunay(oracles::random_points(2, 20, seed));
      double xi_min = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < m.simplices.size(); ++k)
        xi_min = std::min(xi_min,
                          analyze_simplex(m.simplex_points(static_cast<int>(k))).thickness);
      CHECK(constant_c1(m) == doctest::Approx(std::sqrt(3.0) * xi_min).epsilon(1e-12));
    }
  }
  SUBCASE("C2 >= C1 and C2 >= 1 on the Coxeter patch") {
    const Mesh m = coxeter_a_tilde(3, 2, 1.0);
    CHECK(constant_c2(m) >= 1.0);
    CHECK(constant_c2(m) >= constant_c1(m));
  }
  SUBCASE("Coxeter d=2 patch: all elements equilateral, C1 = 0.75") {
    CHECK(constant_c1(coxeter_a_tilde(2, 2, 1.0)) == doctest::Approx(0.75).epsilon(1e-9));
  }
}

TEST_CASE("functionals scale predictably") {
  const Mesh m = delaunay(oracles::random_points(2, 18, 77));
  std::vector<Vec> scaled_pts;
  const double lam = 2.3;
  for (const Vec& p : m.points) scaled_pts.push_back(lam * p);
  Mesh scaled = m;
  scaled.points = scaled_pts;

  const auto [theta_a, hat_a] = rajan_theta(m);
  const auto [theta_b, hat_b] = rajan_theta(scaled);
  CHECK(theta_b == doctest::Approx(std::pow(lam, 4) * theta_a).epsilon(1e-10));
  CHECK(constant_c1(scaled) == doctest::Approx(constant_c1(m)).epsilon(1e-10));
  CHECK(constant_c2(scaled) == doctest::Approx(constant_c2(m)).epsilon(1e-10));
}

TEST_CASE("roughness energy and the J functional") {
  const Mesh sq = unit_square_mesh();
  const auto quad = simplex_quadrature(2, 6);
  SUBCASE("v = x1 on the unit square") {
    CHECK(roughness_energy(sq, scalar_field("coord", 2), quad) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("constant v") {
    ScalarField c;
    c.value = [](const Vec&) { return 4.0; };
    c.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
    CHECK(roughness_energy(sq, c, quad) == 0.0);
    SUBCASE("J with zero forcing is the energy itself") {
      ScalarField zero;
      zero.value = [](const Vec&) { return 0.0; };
      zero.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
      CHECK(energy_J(sq, c, zero, quad) == roughness_energy(sq, c, quad));
      CHECK(energy_J(sq, zero, zero, quad) == 0.0);
    }
  }
  SUBCASE("v = |x|^2/2 on the unit square") {
    CHECK(roughness_energy(sq, scalar_field("quadratic", 2), quad) ==
          doctest::Approx(0.666667).epsilon(1e-6));
  }
  SUBCASE("energy equals gradient_norm squared") {
    const ScalarField v = scalar_field("trig", 2);
    const double a = roughness_energy(sq, v, quad);
    const double g = gradient_norm(sq, ambient_field(v.gradient), quad);
    CHECK(a == doctest::Approx(g * g).epsilon(1e-12));
  }
  SUBCASE("J minimized at the analytic minimizer along a quadratic family") {
    // Strip [0,1] x [0,0.2]; family v_t = t x(1-x) with forcing f = 1.
    // J(t) = t^2 w/3 - t w/3 is minimized at t* = 1/2 (the solution of the
    // 1d two-point problem).
    Mesh strip;
    strip.dim = 2;
    Vec a(2), b(2), c(2), d(2);
    a << 0, 0;
    b << 1, 0;
    c << 1, 0.2;
    d << 0, 0.2;
    strip.points = {a, b, c, d};
    strip.simplices = {{0, 1, 2}, {0, 2, 3}};
    ScalarField one;
    one.value = [](const Vec&) { return 1.0; };
    one.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
    auto family = [](double t) {
      ScalarField v;
      v.value = [t](const Vec& x) { return t * x(0) * (1.0 - x(0)); };
      v.gradient = [t](const Vec& x) {
        Vec g(2);
        g << t * (1.0 - 2.0 * x(0)), 0.0;
        return g;
      };
      return v;
    };
    double best_t = 0.0, best_j = std::numeric_limits<double>::infinity();
    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.05) {
      const double j = energy_J(strip, family(t), one, quad);
      if (j < best_j) {
        best_j = j;
        best_t = t;
      }
    }
    CHECK(best_t == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(energy_J(strip, family(0.5), one, quad) <
          energy_J(strip, family(0.3), one, quad));
  }
}

TEST_CASE("verify_equivalence") {
  const auto quad = simplex_quadrature(2, 6);
  SUBCASE("hand triple on the equilateral triangle") {
    const Mesh m = oracles::single_simplex_mesh(oracles::equilateral_triangle());
    const auto report = verify_equivalence(m, {const_field(1, 0)}, quad);
    REQUIRE(report.checks.size() == 2);
    CHECK(report.all_pass());
    CHECK(report.checks[0].lhs == doctest::Approx(0.493528).epsilon(1e-6));
    CHECK(report.checks[0].rhs == doctest::Approx(0.805927).epsilon(1e-6));
    // sqrt(3) * 3^(1/4) / 2.
    CHECK(report.checks[1].rhs == doctest::Approx(1.1397535284773888).epsilon(1e-9));
  }
  SUBCASE("random polynomial fields on Coxeter patches pass") {
    for (int d = 2; d <= 3; ++d) {
      const Mesh m = coxeter_a_tilde(d, 1, 1.0);
      const auto q = simplex_quadrature(d, 6);
      std::vector<ElementVectorFn> fields;
      for (std::uint64_t s = 0; s < 10; ++s)
        fields.push_back(ambient_field(random_polynomial_vector(d, 3, s).value));
      CHECK(verify_equivalence(m, fields, q).all_pass());
    }
  }
  SUBCASE("axis-aligned field on a near-sliver mesh: lower bound tight") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 0.5, 1e-3;
    const Mesh sliver = oracles::single_simplex_mesh({a, b, c});
    const auto report = verify_equivalence(sliver, {const_field(0, 1)}, quad);
    CHECK(report.all_pass());
    // The y-aligned field drives Psi close to its lower bound.
    CHECK(report.checks[0].tightness < 3.0);
  }
  SUBCASE("no fields rejected") {
    CHECK_THROWS_AS(verify_equivalence(unit_square_mesh(), {}, quad),
                    std::invalid_argument);
  }
}

TEST_CASE("verify_upper_bound") {
  const auto quad = simplex_quadrature(2, 6);
  const Mesh m = coxeter_a_tilde(2, 2, 1.0);
  const auto net = measure_net(m.points, 1e-8, 3, 5000);
  SupNormOptions sup_opts;
  sup_opts.lattice_order = 8;

  SUBCASE("constant field passes with computable slack") {
    NetParams use = net;
    VectorField f = vector_field("const", 2);
    const auto report =
        verify_upper_bound(m, ambient_field(f.value), sizing_constant(1.0), use, quad, sup_opts);
    CHECK(report.all_pass());
    for (const auto& c : report.checks) CHECK(c.tightness >= 1.0);
  }
  SUBCASE("zero field: 0 <= 0") {
    const auto report = verify_upper_bound(m, const_field(0, 0), sizing_constant(1.0),
                                           net, quad, sup_opts);
    CHECK(report.all_pass());
    for (const auto& c : report.checks) CHECK(c.lhs == 0.0);
  }
  SUBCASE("batch over random fields and dimensions") {
    for (int d = 2; d <= 3; ++d) {
      const Mesh mesh = coxeter_a_tilde(d, 1, 1.0);
      const auto n = measure_net(mesh.points, 1e-8, 3, 5000);
      const auto q = simplex_quadrature(d, 6);
      for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto f = random_trig_vector(d, s);
        const auto report =
            verify_upper_bound(mesh, ambient_field(f.value), sizing_constant(1.0), n, q, sup_opts);
        CHECK(report.all_pass());
      }
    }
  }
}

TEST_CASE("verify_error_estimates") {
  const Mesh m = coxeter_a_tilde(2, 2, 0.7);
  ErrorEstimateInputs inputs;
  auto scheme = std::make_shared<InterpolationScheme>(build_scheme(2, 2));
  lebesgue_constant(*scheme, 32);
  inputs.scheme = scheme;
  inputs.sizing = sizing_constant(1.0);
  inputs.net = measure_net(m.points, 1e-8, 3, 5000);
  inputs.quad = simplex_quadrature(2, 6);

  SUBCASE("polynomial gradient of degree <= k: both sides vanish") {
    const ScalarField v = random_polynomial_scalar(2, 3, 11);  // gradient degree 2
    const auto report = verify_error_estimates(m, v, inputs);
    CHECK(report.all_pass());
    for (const auto& c : report.checks) {
      CHECK(c.lhs <= 1e-10);
      CHECK(c.rhs <= 1e-8);
    }
  }
  SUBCASE("trig field passes with finite tightness") {
    const ScalarField v = scalar_field("trig", 2);
    const auto report = verify_error_estimates(m, v, inputs);
    CHECK(report.all_pass());
    for (const auto& c : report.checks) CHECK(c.rhs >= c.lhs);
  }
  SUBCASE("vector variant (independent of any potential)") {
    const VectorField f = random_trig_vector(2, 21);
    const auto report = verify_error_estimates_vector(m, f, inputs);
    CHECK(report.all_pass());
  }
  SUBCASE("scheme without a Lebesgue estimate rejected") {
    ErrorEstimateInputs bad = inputs;
    bad.scheme = std::make_shared<InterpolationScheme>(build_scheme(2, 2));
    CHECK_THROWS_AS(verify_error_estimates(m, scalar_field("trig", 2), bad),
                    std::invalid_argument);
  }
}

TEST_CASE("quality report assembles the constants") {
  const Mesh m = delaunay(oracles::square_corners());
  SupNormOptions sup_opts;
  sup_opts.lattice_order = 6;
  SurrogateOptions surr;
  surr.sample_density = 4;
  const auto r = quality_report(m, scalar_field("trig", 2), sizing_constant(1.0), 2,
                                simplex_quadrature(2, 6), sup_opts, surr);
  CHECK(std::abs(r.delta) <= 1e-12);  // cocircular corners
  CHECK(r.c1 > 0);
  CHECK(r.c2 >= r.c1);
  CHECK(r.theta_hat * (2 + 1) * (2 + 2) == doctest::Approx(r.theta).epsilon(1e-12));
  CHECK(r.c1 == doctest::Approx(std::sqrt(3.0) * r.xi_min).epsilon(1e-12));
  CHECK(r.lambda > 1.0);
  CHECK(r.bound_chain.count("equivalence_upper_rhs") == 1);
}

TEST_CASE("deterministic across thread counts") {
  const Mesh m = coxeter_a_tilde(2, 2, 1.0);
  const auto quad = simplex_quadrature(2, 8);
  const ScalarField v = scalar_field("trig", 2);
  const auto w = ambient_field(v.gradient);
  FunctionalOptions one;
  one.threads = 1;
  FunctionalOptions four;
  four.threads = 4;
  // Reductions run in index order regardless of thread count, so the
  // results are bitwise identical.
  CHECK(roughness_functional(m, w, quad, one) == roughness_functional(m, w, quad, four));
  CHECK(gradient_norm(m, w, quad, one) == gradient_norm(m, w, quad, four));
}
