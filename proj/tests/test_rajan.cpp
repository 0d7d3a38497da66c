// Delaunay minimizes the hypervolume-weighted sum of squared edge lengths
// and the maximum min-containment radius over all triangulations of a fixed
// planar point set. Checked by exhaustive flip-graph enumeration.
#include <meshcert/functionals.hpp>
#include <meshcert/mesh.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>

using namespace meshcert;

namespace {

oracles::Triangulation as_triangulation(const Mesh& mesh) {
  oracles::Triangulation t;
  for (const auto& s : mesh.simplices) {
    oracles::Triangle tri{s[0], s[1], s[2]};
    std::sort(tri.begin(), tri.end());
    t.insert(tri);
  }
  return t;
}

Mesh as_mesh(const std::vector<Vec>& pts, const oracles::Triangulation& t) {
  Mesh m;
  m.dim = 2;
  m.points = pts;
  for (const auto& tri : t) m.simplices.push_back({tri[0], tri[1], tri[2]});
  m.canonicalize();
  return m;
}

double max_mcc_radius(const Mesh& m) {
  double r = 0.0;
  for (size_t k = 0; k < m.simplices.size(); ++k)
    r = std::max(r, min_containment_ball(m.simplex_points(static_cast<int>(k))).radius);
  return r;
}

}  // namespace

TEST_CASE("theta and max-R_min minimality over all triangulations, <= 7 points") {
  int instances = 0;
  for (std::uint64_t seed = 1; instances < 8; ++seed) {
    const int n = 5 + static_cast<int>(seed % 3);
    const auto pts = oracles::general_position_points(n, seed * 13 + 1);
    const Mesh del = delaunay(pts);
    if (!oracles::delaunay_empty_circumballs(del)) continue;  // paranoia
    ++instances;

    const auto all =
        oracles::enumerate_triangulations(pts, as_triangulation(del));
    REQUIRE(all.size() >= 1);
    const double theta_del = rajan_theta(del).first;
    const double rmin_del = max_mcc_radius(del);
    int equal_theta = 0;
    for (const auto& t : all) {
      const Mesh m = as_mesh(pts, t);
      const double theta = rajan_theta(m).first;
      CHECK(theta_del <= theta + 1e-12);
      CHECK(rmin_del <= max_mcc_radius(m) + 1e-12);
      if (std::abs(theta - theta_del) < 1e-9) ++equal_theta;
    }
    // In general position the Delaunay minimizer is unique.
    CHECK(equal_theta == 1);
  }
}

TEST_CASE("flip enumeration sanity: convex quadrilateral has two triangulations") {
  const auto pts = oracles::square_corners();
  // Perturb to break the cocircular tie but keep convexity.
  auto moved = pts;
  moved[2](0) = 1.05;
  const Mesh del = delaunay(moved);
  const auto all = oracles::enumerate_triangulations(moved, as_triangulation(del));
  CHECK(all.size() == 2);
}
