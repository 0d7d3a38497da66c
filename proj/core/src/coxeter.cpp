#include <meshcert/mesh.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace meshcert {

namespace {

// Work in the hyperplane H = {y in R^{d+1} : sum y_i = 0}. The fundamental
// alcove has vertices v_0 = 0 and v_k with first k coordinates (d+1-k)/(d+1)
// and the remaining ones -k/(d+1); every alcove is (lattice translate,
// coordinate permutation) of it. Vertices are kept as integer vectors scaled
// by (d+1) so membership filtering and deduplication are exact.
using IntVec = std::vector<long long>;

IntVec scaled_alcove_vertex(int d, int k) {
  IntVec v(static_cast<size_t>(d) + 1);
  for (int i = 0; i <= d; ++i)
    v[static_cast<size_t>(i)] = (i < k) ? (d + 1 - k) : -k;
  return v;
}

}  // namespace

Mesh coxeter_a_tilde(int d, int layers, double scale) {
  if (d < 2 || d > 6)
    throw std::invalid_argument("coxeter_a_tilde: supported dimensions are 2..6");
  if (layers < 1)
    throw std::invalid_argument("coxeter_a_tilde: layers must be >= 1");
  if (!(scale > 0.0))
    throw std::invalid_argument("coxeter_a_tilde: scale must be positive");

  const int n = d + 1;
  std::vector<IntVec> base(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) base[static_cast<size_t>(k)] = scaled_alcove_vertex(d, k);

  // Enumerate lattice translates lambda (integer vectors summing to zero)
  // and permutations; keep alcoves whose barycenter satisfies
  // max_i y_i - min_j y_j < layers. The region boundary lies on arrangement
  // hyperplanes, so alcoves never straddle it and the test is exact on the
  // integer barycenter (scale n^2).
  const long long span = layers + 1;
  std::vector<int> digits(static_cast<size_t>(d), 0);

  IntVec colsum(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      colsum[static_cast<size_t>(j)] += base[static_cast<size_t>(k)][static_cast<size_t>(j)];

  std::map<IntVec, int> vertex_ids;
  std::vector<IntVec> vertices;
  std::vector<SimplexVerts> simplices;

  std::vector<int> perm(static_cast<size_t>(n));

  bool done = false;
  while (!done) {
    IntVec lambda(static_cast<size_t>(n));
    long long sum = 0;
    for (int i = 0; i < d; ++i) {
      lambda[static_cast<size_t>(i)] = digits[static_cast<size_t>(i)] - span;
      sum += lambda[static_cast<size_t>(i)];
    }
    lambda[static_cast<size_t>(d)] = -sum;

    const auto [lmin, lmax] = std::minmax_element(lambda.begin(), lambda.end());
    if (std::abs(lambda[static_cast<size_t>(d)]) <= span && *lmax - *lmin <= span) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        // Barycenter of the alcove, scaled by n^2; strictly interior to
        // the alcove, so the strict comparison classifies exactly.
        long long lo = 0, hi = 0;
        for (int i = 0; i < n; ++i) {
          const long long b =
              static_cast<long long>(n) * n * lambda[static_cast<size_t>(i)] +
              colsum[static_cast<size_t>(perm[static_cast<size_t>(i)])];
          if (i == 0) {
            lo = hi = b;
          } else {
            lo = std::min(lo, b);
            hi = std::max(hi, b);
          }
        }
        if (hi - lo >= static_cast<long long>(layers) * n * n) continue;

        SimplexVerts cell(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
          IntVec v(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i)
            v[static_cast<size_t>(i)] =
                n * lambda[static_cast<size_t>(i)] +
                base[static_cast<size_t>(k)][static_cast<size_t>(perm[static_cast<size_t>(i)])];
          auto it = vertex_ids.find(v);
          if (it == vertex_ids.end()) {
            it = vertex_ids.emplace(v, static_cast<int>(vertices.size())).first;
            vertices.push_back(v);
          }
          cell[static_cast<size_t>(k)] = it->second;
        }
        simplices.push_back(std::move(cell));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }

    int pos = 0;
    while (pos < d) {
      if (++digits[static_cast<size_t>(pos)] <= 2 * span) break;
      digits[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    done = (pos == d);
  }

  if (simplices.empty())
    throw std::logic_error("coxeter_a_tilde: empty patch");

  // Renumber vertices in insertion-map order (already deterministic), then
  // project H isometrically onto R^d via an orthonormal basis.
  Mat span_h(n, d);
  for (int j = 0; j < d; ++j) {
    Vec col = Vec::Zero(n);
    col(j) = 1.0;
    col(j + 1) = -1.0;
    span_h.col(j) = col;
  }
  const Mat q = Eigen::HouseholderQR<Mat>(span_h).householderQ() * Mat::Identity(n, d);

  Mesh mesh;
  mesh.dim = d;
  mesh.points.reserve(vertices.size());
  for (const IntVec& v : vertices) {
    Vec y(n);
    for (int i = 0; i < n; ++i)
      y(i) = static_cast<double>(v[static_cast<size_t>(i)]) / static_cast<double>(n);
    mesh.points.push_back(scale * (q.transpose() * y));
  }
  mesh.simplices = std::move(simplices);
  mesh.canonicalize();
  return mesh;
}

}  // namespace meshcert
