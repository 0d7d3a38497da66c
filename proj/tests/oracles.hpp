// Test-side oracles, independent of the library implementation paths they
// check: closed forms, Monte Carlo integration, subgradient ball fitting,
// exhaustive scans, and a flip-graph triangulation enumerator.
#pragma once

#include <meshcert/mesh.hpp>
#include <meshcert/types.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace oracles {

using meshcert::Mesh;
using meshcert::Vec;

inline std::vector<Vec> unit_right_triangle() {
  Vec a(2), b(2), c(2);
  a << 0, 0;
  b << 1, 0;
  c << 0, 1;
  return {a, b, c};
}

inline std::vector<Vec> equilateral_triangle() {
  Vec a(2), b(2), c(2);
  a << 0, 0;
  b << 1, 0;
  c << 0.5, std::sqrt(3.0) / 2.0;
  return {a, b, c};
}

inline std::vector<Vec> regular_tetrahedron() {
  // Side length 1.
  Vec a(3), b(3), c(3), d(3);
  a << 0, 0, 0;
  b << 1, 0, 0;
  c << 0.5, std::sqrt(3.0) / 2.0, 0;
  d << 0.5, std::sqrt(3.0) / 6.0, std::sqrt(2.0 / 3.0);
  return {a, b, c, d};
}

inline std::vector<Vec> unit_right_simplex(int d) {
  std::vector<Vec> pts{Vec::Zero(d)};
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    pts.push_back(e);
  }
  return pts;
}

inline Mesh single_simplex_mesh(const std::vector<Vec>& pts) {
  Mesh m;
  m.dim = static_cast<int>(pts[0].size());
  m.points = pts;
  meshcert::SimplexVerts s(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) s[i] = static_cast<int>(i);
  m.simplices.push_back(s);
  return m;
}

inline std::vector<Vec> square_corners() {
  Vec a(2), b(2), c(2), d(2);
  a << 0, 0;
  b << 1, 0;
  c << 1, 1;
  d << 0, 1;
  return {a, b, c, d};
}

inline std::vector<Vec> random_points(int d, int n, std::uint64_t seed,
                                      double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vec> pts;
  pts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec p(d);
    for (int j = 0; j < d; ++j) p(j) = u(rng);
    pts.push_back(p);
  }
  return pts;
}

inline Vec random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  for (int j = 0; j < d; ++j) v(j) = g(rng);
  return v / v.norm();
}

/// Random rotation matrix via QR of a Gaussian matrix.
inline meshcert::Mat random_rotation(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  meshcert::Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<meshcert::Mat> qr(a);
  meshcert::Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

/// Uniform sample inside a simplex (Dirichlet(1,...,1) barycentrics).
inline Vec sample_in_simplex(const std::vector<Vec>& verts, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  const int d = static_cast<int>(verts[0].size());
  Vec x = Vec::Zero(d);
  double total = 0.0;
  std::vector<double> w(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) {
    w[i] = expo(rng);
    total += w[i];
  }
  for (size_t i = 0; i < verts.size(); ++i) x += (w[i] / total) * verts[i];
  return x;
}

/// Monte Carlo integral over a mesh; the integrand sees the element index.
inline double mc_integrate(const Mesh& mesh,
                           const std::function<double(int, const Vec&)>& f,
                           int samples, std::uint64_t seed) {
  std::vector<double> vols(mesh.simplices.size());
  double total = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    vols[k] = meshcert::simplex_volume(mesh.simplex_points(static_cast<int>(k)));
    total += vols[k];
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    double pick = u(rng) * total;
    size_t k = 0;
    while (k + 1 < vols.size() && pick > vols[k]) {
      pick -= vols[k];
      ++k;
    }
    acc += f(static_cast<int>(k),
             sample_in_simplex(mesh.simplex_points(static_cast<int>(k)), rng));
  }
  return total * acc / samples;
}

/// Distance from a point to the affine hull of a point set, by least squares
/// projection (independent of the determinant-identity route).
inline double projection_distance(const Vec& p, const std::vector<Vec>& hull_pts) {
  const int d = static_cast<int>(p.size());
  const int m = static_cast<int>(hull_pts.size()) - 1;
  if (m == 0) return (p - hull_pts[0]).norm();
  meshcert::Mat a(d, m);
  for (int i = 0; i < m; ++i) a.col(i) = hull_pts[static_cast<size_t>(i) + 1] - hull_pts[0];
  const Vec rhs = p - hull_pts[0];
  const Vec w = a.colPivHouseholderQr().solve(rhs);
  return (rhs - a * w).norm();
}

/// Smallest enclosing ball by subgradient descent on max_i |x - p_i|
/// (convex), with averaging restarts. Independent of the support-subset
/// solver in the library.
inline meshcert::Ball descent_min_ball(const std::vector<Vec>& pts) {
  const int d = static_cast<int>(pts[0].size());
  Vec x = Vec::Zero(d);
  for (const Vec& p : pts) x += p;
  x /= static_cast<double>(pts.size());
  double spread = 0.0;
  for (const Vec& p : pts) spread = std::max(spread, (p - x).norm());
  double step = spread;
  for (int it = 0; it < 20000; ++it) {
    size_t far = 0;
    double best = -1.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      const double dist = (pts[i] - x).norm();
      if (dist > best) {
        best = dist;
        far = i;
      }
    }
    if (best == 0.0) break;
    x += step * (pts[far] - x) / best;
    step *= 0.999;
  }
  double r = 0.0;
  for (const Vec& p : pts) r = std::max(r, (p - x).norm());
  return {x, r};
}

/// Exhaustive empty-circumball check of a Delaunay mesh.
inline bool delaunay_empty_circumballs(const Mesh& mesh, double rel_tol = 1e-10) {
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    const meshcert::Ball cs = meshcert::circumsphere(verts);
    for (size_t p = 0; p < mesh.points.size(); ++p) {
      const auto& s = mesh.simplices[k];
      if (std::find(s.begin(), s.end(), static_cast<int>(p)) != s.end()) continue;
      if ((mesh.points[p] - cs.center).norm() < cs.radius * (1.0 - rel_tol))
        return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of all triangulations of a planar point set (all
// points used as vertices), by breadth-first search of the edge-flip graph
// starting from a seed triangulation. Requires general position.
// ---------------------------------------------------------------------------

using Triangle = std::array<int, 3>;
using Triangulation = std::set<Triangle>;

inline double orient2d(const Vec& a, const Vec& b, const Vec& c) {
  return (b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0));
}

inline std::vector<Triangulation> enumerate_triangulations(
    const std::vector<Vec>& pts, const Triangulation& seed) {
  std::set<Triangulation> seen{seed};
  std::vector<Triangulation> queue{seed};
  while (!queue.empty()) {
    Triangulation t = queue.back();
    queue.pop_back();
    // Edge -> opposite vertices.
    std::map<std::pair<int, int>, std::vector<int>> opposite;
    for (const Triangle& tri : t) {
      for (int e = 0; e < 3; ++e) {
        int u = tri[static_cast<size_t>(e)], v = tri[static_cast<size_t>((e + 1) % 3)],
            w = tri[static_cast<size_t>((e + 2) % 3)];
        if (u > v) std::swap(u, v);
        opposite[{u, v}].push_back(w);
      }
    }
    for (const auto& [edge, opp] : opposite) {
      if (opp.size() != 2) continue;
      const int a = edge.first, b = edge.second, c = opp[0], dd = opp[1];
      // Flip a-b to c-d only when acbd is strictly convex.
      if (orient2d(pts[static_cast<size_t>(a)], pts[static_cast<size_t>(b)], pts[static_cast<size_t>(c)]) *
              orient2d(pts[static_cast<size_t>(a)], pts[static_cast<size_t>(b)], pts[static_cast<size_t>(dd)]) >=
          0)
        continue;
      if (orient2d(pts[static_cast<size_t>(c)], pts[static_cast<size_t>(dd)], pts[static_cast<size_t>(a)]) *
              orient2d(pts[static_cast<size_t>(c)], pts[static_cast<size_t>(dd)], pts[static_cast<size_t>(b)]) >=
          0)
        continue;
      Triangulation next = t;
      auto sorted = [](int x, int y, int z) {
        Triangle tr{x, y, z};
        std::sort(tr.begin(), tr.end());
        return tr;
      };
      next.erase(sorted(a, b, c));
      next.erase(sorted(a, b, dd));
      next.insert(sorted(a, c, dd));
      next.insert(sorted(b, c, dd));
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

/// Random planar points in general position (no 3 nearly collinear, no 4
/// nearly cocircular).
inline std::vector<Vec> general_position_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) {
      Vec p(2);
      p << u(rng), u(rng);
      pts.push_back(p);
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        for (int k = j + 1; k < n && ok; ++k)
          if (std::abs(orient2d(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)],
                                pts[static_cast<size_t>(k)])) < 1e-4)
            ok = false;
    if (!ok) continue;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        for (int k = j + 1; k < n && ok; ++k)
          for (int l = k + 1; l < n && ok; ++l) {
            const auto tri = std::vector<Vec>{pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)],
                                              pts[static_cast<size_t>(k)]};
            if (meshcert::simplex_degenerate(tri)) {
              ok = false;
              break;
            }
            const meshcert::Ball b = meshcert::circumsphere(tri);
            if (std::abs((pts[static_cast<size_t>(l)] - b.center).norm() - b.radius) < 1e-5)
              ok = false;
          }
    if (ok) return pts;
  }
  throw std::runtime_error("failed to draw general-position points");
}

}  // namespace oracles
