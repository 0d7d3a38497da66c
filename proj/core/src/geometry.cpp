#include <meshcert/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

namespace meshcert {

namespace {

void check_common_dimension(const std::vector<Vec>& pts) {
  if (pts.empty()) throw std::invalid_argument("empty point list");
  const Eigen::Index d = pts.front().size();
  if (d < 1) throw std::invalid_argument("points must have dimension >= 1");
  for (const Vec& p : pts) {
    if (p.size() != d)
      throw std::invalid_argument("dimension mismatch among points");
    if (!p.allFinite())
      throw std::invalid_argument("non-finite point coordinate");
  }
}

void check_simplex(const std::vector<Vec>& pts) {
  check_common_dimension(pts);
  const auto d = static_cast<size_t>(pts.front().size());
  if (pts.size() != d + 1)
    throw std::invalid_argument("a d-simplex needs exactly d+1 points");
}

Mat edge_matrix(const std::vector<Vec>& pts) {
  const int d = static_cast<int>(pts.front().size());
  Mat e(d, d);
  for (int i = 0; i < d; ++i) e.col(i) = pts[static_cast<size_t>(i) + 1] - pts[0];
  return e;
}

// Smallest ball whose boundary passes through all support points, with
// center in their affine hull. nullopt when the support is affinely
// dependent.
std::optional<Ball> ball_through(const std::vector<Vec>& support) {
  const int m = static_cast<int>(support.size()) - 1;
  if (m == 0) return Ball{support[0], 0.0};
  Mat g(m, m);
  Vec rhs(m);
  std::vector<Vec> edges(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    edges[static_cast<size_t>(i)] = support[static_cast<size_t>(i) + 1] - support[0];
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      g(i, j) = edges[static_cast<size_t>(i)].dot(edges[static_cast<size_t>(j)]);
    rhs(i) = 0.5 * edges[static_cast<size_t>(i)].squaredNorm();
  }
  double scale = g.cwiseAbs().maxCoeff();
  if (scale == 0.0) return std::nullopt;
  Vec beta(m);
  if (!detail::solve_long_double(g, rhs, beta)) return std::nullopt;
  Vec center = support[0];
  for (int i = 0; i < m; ++i) center += beta(i) * edges[static_cast<size_t>(i)];
  return Ball{center, (center - support[0]).norm()};
}

Ball smallest_ball_bruteforce(const std::vector<Vec>& pts) {
  const size_t n = pts.size();
  double spread = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      spread = std::max(spread, (pts[i] - pts[j]).norm());
  const double tol = 1e-12 * std::max(spread, 1e-300);

  Ball best;
  best.radius = std::numeric_limits<double>::infinity();
  const size_t subsets = size_t{1} << n;
  for (size_t mask = 1; mask < subsets; ++mask) {
    std::vector<Vec> support;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) support.push_back(pts[i]);
    if (support.size() > static_cast<size_t>(pts[0].size()) + 1) continue;
    auto ball = ball_through(support);
    if (!ball) continue;
    if (ball->radius >= best.radius) continue;
    bool covers = true;
    for (const Vec& p : pts)
      if ((p - ball->center).norm() > ball->radius + tol) {
        covers = false;
        break;
      }
    if (covers) best = *ball;
  }
  return best;
}

Ball welzl_ball(std::vector<const Vec*>& pts, std::vector<Vec>& support,
                size_t n, int dim) {
  if (n == 0 || static_cast<int>(support.size()) == dim + 1) {
    if (support.empty())
      return Ball{Vec::Zero(dim), -1.0};  // empty ball: covers nothing
    auto b = ball_through(support);
    if (b) return *b;
    // Affinely dependent support: drop to the brute-force path.
    return smallest_ball_bruteforce(support);
  }
  const Vec* p = pts[n - 1];
  Ball b = welzl_ball(pts, support, n - 1, dim);
  const double pad = 1e-12 * std::max(1.0, std::abs(b.radius));
  if (b.radius >= 0.0 && (*p - b.center).norm() <= b.radius + pad) return b;
  support.push_back(*p);
  b = welzl_ball(pts, support, n - 1, dim);
  support.pop_back();
  return b;
}

}  // namespace

namespace detail {

long double det_long_double(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<long double> m(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[static_cast<size_t>(i * n + j)] = static_cast<long double>(a(i, j));
  long double det = 1.0L;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    long double best = std::abs(m[static_cast<size_t>(col * n + col)]);
    for (int r = col + 1; r < n; ++r) {
      const long double v = std::abs(m[static_cast<size_t>(r * n + col)]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0L) return 0.0L;
    if (pivot != col) {
      for (int j = 0; j < n; ++j)
        std::swap(m[static_cast<size_t>(pivot * n + j)],
                  m[static_cast<size_t>(col * n + j)]);
      det = -det;
    }
    const long double p = m[static_cast<size_t>(col * n + col)];
    det *= p;
    for (int r = col + 1; r < n; ++r) {
      const long double f = m[static_cast<size_t>(r * n + col)] / p;
      for (int j = col; j < n; ++j)
        m[static_cast<size_t>(r * n + j)] -= f * m[static_cast<size_t>(col * n + j)];
    }
  }
  return det;
}

bool solve_long_double(const Mat& a, const Vec& b, Vec& x) {
  const int n = static_cast<int>(a.rows());
  std::vector<long double> m(static_cast<size_t>(n) * static_cast<size_t>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      m[static_cast<size_t>(i * (n + 1) + j)] = static_cast<long double>(a(i, j));
    m[static_cast<size_t>(i * (n + 1) + n)] = static_cast<long double>(b(i));
  }
  long double max_entry = 0.0L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      max_entry = std::max(max_entry, std::abs(m[static_cast<size_t>(i * (n + 1) + j)]));
  if (max_entry == 0.0L) return false;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    long double best = std::abs(m[static_cast<size_t>(col * (n + 1) + col)]);
    for (int r = col + 1; r < n; ++r) {
      const long double v = std::abs(m[static_cast<size_t>(r * (n + 1) + col)]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best <= 1e-18L * max_entry) return false;
    if (pivot != col)
      for (int j = 0; j <= n; ++j)
        std::swap(m[static_cast<size_t>(pivot * (n + 1) + j)],
                  m[static_cast<size_t>(col * (n + 1) + j)]);
    const long double p = m[static_cast<size_t>(col * (n + 1) + col)];
    for (int r = col + 1; r < n; ++r) {
      const long double f = m[static_cast<size_t>(r * (n + 1) + col)] / p;
      for (int j = col; j <= n; ++j)
        m[static_cast<size_t>(r * (n + 1) + j)] -= f * m[static_cast<size_t>(col * (n + 1) + j)];
    }
  }
  x.resize(n);
  for (int i = n - 1; i >= 0; --i) {
    long double acc = m[static_cast<size_t>(i * (n + 1) + n)];
    for (int j = i + 1; j < n; ++j)
      acc -= m[static_cast<size_t>(i * (n + 1) + j)] * static_cast<long double>(x(j));
    x(i) = static_cast<double>(acc / m[static_cast<size_t>(i * (n + 1) + i)]);
  }
  return true;
}

}  // namespace detail

double simplex_volume(const std::vector<Vec>& pts) {
  check_simplex(pts);
  const int d = static_cast<int>(pts.front().size());
  long double fact = 1.0L;
  for (int i = 2; i <= d; ++i) fact *= static_cast<long double>(i);
  const long double det = detail::det_long_double(edge_matrix(pts));
  return static_cast<double>(std::abs(det) / fact);
}

double simplex_diameter(const std::vector<Vec>& pts) {
  double diam = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      diam = std::max(diam, (pts[i] - pts[j]).norm());
  return diam;
}

bool simplex_degenerate(const std::vector<Vec>& pts) {
  check_simplex(pts);
  const int d = static_cast<int>(pts.front().size());
  const double diam = simplex_diameter(pts);
  if (diam == 0.0) return true;
  return simplex_volume(pts) < 1e-12 * std::pow(diam, d);
}

std::pair<Vec, double> facet_normal_and_volume(const std::vector<Vec>& pts,
                                               int r) {
  check_simplex(pts);
  const int d = static_cast<int>(pts.front().size());
  if (r < 0 || r > d) throw std::invalid_argument("vertex index out of range");

  if (simplex_degenerate(pts)) return {Vec::Zero(d), 0.0};

  const int base = (r == 0) ? 1 : 0;
  std::vector<Vec> span;
  span.reserve(static_cast<size_t>(d) - 1);
  for (int i = 0; i <= d; ++i)
    if (i != r && i != base) span.push_back(pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(base)]);

  // Generalized cross product: component m is the signed m-th cofactor of
  // the (d-1) x d matrix of facet spanning vectors.
  Vec n(d);
  Mat minor(d - 1, d - 1);
  for (int m = 0; m < d; ++m) {
    for (int row = 0; row < d - 1; ++row) {
      int cc = 0;
      for (int col = 0; col < d; ++col) {
        if (col == m) continue;
        minor(row, cc++) = span[static_cast<size_t>(row)](col);
      }
    }
    const long double dm = (d == 1) ? 1.0L : detail::det_long_double(minor);
    n(m) = static_cast<double>(((m % 2) == 0 ? 1.0L : -1.0L) * dm);
  }

  long double fact = 1.0L;
  for (int i = 2; i <= d - 1; ++i) fact *= static_cast<long double>(i);
  const double facet_vol = static_cast<double>(
      static_cast<long double>(n.norm()) / fact);

  // Orient outward: away from the opposite vertex r.
  if (n.dot(pts[static_cast<size_t>(r)] - pts[static_cast<size_t>(base)]) > 0.0) n = -n;
  const double mag = n.norm();
  if (mag > 0.0) n *= facet_vol / mag;
  return {n, facet_vol};
}

double elevation(const std::vector<Vec>& pts, int s) {
  check_simplex(pts);
  if (simplex_degenerate(pts))
    throw std::domain_error("elevation of a degenerate simplex");
  const int d = static_cast<int>(pts.front().size());
  const double facet = facet_normal_and_volume(pts, s).second;
  return d * simplex_volume(pts) / facet;
}

double thickness(const SimplexGeometry& geom) {
  if (geom.degenerate) return 0.0;
  return geom.thickness;
}

Ball circumsphere(const std::vector<Vec>& pts) {
  check_simplex(pts);
  if (simplex_degenerate(pts))
    throw std::domain_error("circumsphere unbounded: degenerate simplex");
  const int d = static_cast<int>(pts.front().size());
  Mat a(d, d);
  Vec b(d);
  for (int i = 0; i < d; ++i) {
    const Vec e = pts[static_cast<size_t>(i) + 1] - pts[0];
    a.row(i) = 2.0 * e.transpose();
    b(i) = pts[static_cast<size_t>(i) + 1].squaredNorm() - pts[0].squaredNorm();
  }
  Vec c;
  if (!detail::solve_long_double(a, b, c))
    throw std::domain_error("circumsphere unbounded: degenerate simplex");
  return Ball{c, (c - pts[0]).norm()};
}

Ball min_containment_ball(const std::vector<Vec>& pts) {
  check_common_dimension(pts);
  const int d = static_cast<int>(pts.front().size());
  if (pts.size() <= static_cast<size_t>(d) + 2) return smallest_ball_bruteforce(pts);

  std::vector<const Vec*> ptrs(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) ptrs[i] = &pts[i];
  std::mt19937_64 rng(0x5eed5eedULL);
  std::shuffle(ptrs.begin(), ptrs.end(), rng);
  std::vector<Vec> support;
  return welzl_ball(ptrs, support, ptrs.size(), d);
}

SimplexGeometry analyze_simplex(const std::vector<Vec>& pts) {
  check_simplex(pts);
  const int d = static_cast<int>(pts.front().size());
  SimplexGeometry g;
  g.dim = d;
  g.volume = simplex_volume(pts);
  g.diameter = simplex_diameter(pts);
  g.degenerate = (g.diameter == 0.0) || (g.volume < 1e-12 * std::pow(g.diameter, d));
  g.elevations.assign(static_cast<size_t>(d) + 1, 0.0);
  g.facet_volumes.assign(static_cast<size_t>(d) + 1, 0.0);
  if (g.degenerate) {
    g.circumcenter = Vec::Zero(d);
    g.mcc_center = Vec::Zero(d);
    return g;
  }
  for (int s = 0; s <= d; ++s) {
    g.facet_volumes[static_cast<size_t>(s)] = facet_normal_and_volume(pts, s).second;
    g.elevations[static_cast<size_t>(s)] = d * g.volume / g.facet_volumes[static_cast<size_t>(s)];
  }
  g.thickness = *std::min_element(g.elevations.begin(), g.elevations.end()) /
                (d * g.diameter);
  const Ball cs = circumsphere(pts);
  g.circumcenter = cs.center;
  g.circumradius = cs.radius;
  const Ball mcc = min_containment_ball(pts);
  g.mcc_center = mcc.center;
  g.mcc_radius = mcc.radius;
  return g;
}

}  // namespace meshcert
