#include <meshcert/interpolation.hpp>

#include <meshcert/geometry.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace meshcert {

namespace {

long double factorial_ld(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= static_cast<long double>(i);
  return f;
}

std::vector<std::vector<int>> graded_exponents(int d, int k) {
  // All multi-indices with |alpha| <= k, ordered by total degree then
  // reverse-odometer within a degree.
  std::vector<std::vector<int>> out;
  for (int total = 0; total <= k; ++total) {
    std::vector<int> alpha(static_cast<size_t>(d), 0);
    alpha[0] = total;
    while (true) {
      out.push_back(alpha);
      // Next composition of `total` into d parts.
      int i = 0;
      while (i < d - 1 && alpha[static_cast<size_t>(i)] == 0) ++i;
      if (i == d - 1) break;
      const int v = alpha[static_cast<size_t>(i)];
      alpha[static_cast<size_t>(i)] = 0;
      alpha[0] = v - 1;
      ++alpha[static_cast<size_t>(i) + 1];
    }
    if (d == 1) continue;
  }
  return out;
}

Vec monomials_at(const std::vector<std::vector<int>>& exps, const Vec& ref) {
  Vec m(static_cast<Eigen::Index>(exps.size()));
  for (size_t a = 0; a < exps.size(); ++a) {
    double v = 1.0;
    for (size_t j = 0; j < exps[a].size(); ++j)
      for (int rep = 0; rep < exps[a][j]; ++rep) v *= ref(static_cast<Eigen::Index>(j));
    m(static_cast<Eigen::Index>(a)) = v;
  }
  return m;
}

// Degree-graded orthonormalization of the monomials under the normalized L2
// inner product on the reference simplex (closed-form Gram entries).
Mat orthonormal_coeffs(const std::vector<std::vector<int>>& exps, int d) {
  const int n = static_cast<int>(exps.size());
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> gram(n, n);
  const long double dfact = factorial_ld(d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      long double num = dfact;
      int total = 0;
      for (int j = 0; j < d; ++j) {
        const int s = exps[static_cast<size_t>(a)][static_cast<size_t>(j)] +
                      exps[static_cast<size_t>(b)][static_cast<size_t>(j)];
        num *= factorial_ld(s);
        total += s;
      }
      gram(a, b) = num / factorial_ld(total + d);
    }
  // Cholesky gram = L L^T; phi = L^{-1} monomials.
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> chol =
      gram.llt().matrixL();
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> inv =
      Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      long double acc = inv(row, col);
      for (int j = 0; j < row; ++j) acc -= chol(row, j) * inv(j, col);
      inv(row, col) = acc / chol(row, row);
    }
  }
  return inv.cast<double>();
}

std::vector<Vec> principal_lattice(int d, int order) {
  // All barycentric tuples alpha/order with |alpha| = order.
  std::vector<Vec> out;
  std::vector<int> alpha(static_cast<size_t>(d) + 1, 0);
  alpha[0] = order;
  while (true) {
    Vec b(d + 1);
    for (int i = 0; i <= d; ++i)
      b(i) = static_cast<double>(alpha[static_cast<size_t>(i)]) / order;
    out.push_back(b);
    int i = 0;
    while (i < d && alpha[static_cast<size_t>(i)] == 0) ++i;
    if (i == d) break;
    const int v = alpha[static_cast<size_t>(i)];
    alpha[static_cast<size_t>(i)] = 0;
    alpha[0] = v - 1;
    ++alpha[static_cast<size_t>(i) + 1];
  }
  return out;
}

InterpolationScheme build_from_points(int d, int k, std::vector<Vec> bary_points,
                                      bool user_supplied) {
  InterpolationScheme s;
  s.dim = d;
  s.degree = k;
  s.exponents = graded_exponents(d, k);
  s.n_points = static_cast<int>(s.exponents.size());
  if (static_cast<int>(bary_points.size()) != s.n_points)
    throw std::invalid_argument("interpolation point count must equal (k+d)!/(k!d!)");
  s.bary_points = std::move(bary_points);
  for (const Vec& b : s.bary_points) {
    if (b.size() != d + 1)
      throw std::invalid_argument("interpolation points must be barycentric tuples");
    Vec r(d);
    for (int j = 0; j < d; ++j) r(j) = b(j + 1);
    s.ref_points.push_back(r);
  }
  s.ortho_coeffs = orthonormal_coeffs(s.exponents, d);

  Mat nodal(s.n_points, s.n_points);
  for (int i = 0; i < s.n_points; ++i)
    nodal.row(i) =
        (s.ortho_coeffs * monomials_at(s.exponents, s.ref_points[static_cast<size_t>(i)]))
            .transpose();
  Eigen::JacobiSVD<Mat> svd(nodal);
  const double smin = svd.singularValues().minCoeff();
  s.condition_number =
      (smin > 0.0) ? svd.singularValues().maxCoeff() / smin
                   : std::numeric_limits<double>::infinity();
  if (user_supplied && !(s.condition_number < 1e12))
    throw std::invalid_argument("interpolation point set is not unisolvent");

  s.basis_coeffs = nodal.partialPivLu().solve(Mat::Identity(s.n_points, s.n_points))
                       .transpose();

  // Cardinality and partition-of-unity checks.
  const Mat check = s.basis_matrix(s.bary_points);
  const double delta_err = (check - Mat::Identity(s.n_points, s.n_points))
                               .cwiseAbs()
                               .maxCoeff();
  if (!(delta_err < 1e-10))
    throw std::runtime_error("interpolation basis failed the cardinality check");
  for (const Vec& b : principal_lattice(d, std::max(2, k))) {
    const double pu = s.basis_values([&] {
                         Vec r(d);
                         for (int j = 0; j < d; ++j) r(j) = b(j + 1);
                         return r;
                       }())
                          .sum();
    if (!(std::abs(pu - 1.0) < 1e-10))
      throw std::runtime_error("interpolation basis failed partition of unity");
  }
  return s;
}

}  // namespace

Vec InterpolationScheme::basis_values(const Vec& ref) const {
  return basis_coeffs * (ortho_coeffs * monomials_at(exponents, ref));
}

Mat InterpolationScheme::basis_matrix(const std::vector<Vec>& bary_queries) const {
  Mat out(static_cast<Eigen::Index>(bary_queries.size()), n_points);
  for (size_t q = 0; q < bary_queries.size(); ++q) {
    Vec r(dim);
    for (int j = 0; j < dim; ++j) r(j) = bary_queries[q](j + 1);
    out.row(static_cast<Eigen::Index>(q)) = basis_values(r).transpose();
  }
  return out;
}

InterpolationScheme build_scheme(int d, int k) {
  if (d < 1) throw std::invalid_argument("scheme dimension must be >= 1");
  if (k < 1) throw std::invalid_argument("scheme degree must be >= 1");
  return build_from_points(d, k, principal_lattice(d, k), false);
}

InterpolationScheme build_scheme(int d, int k, const std::vector<Vec>& user_bary_points) {
  if (d < 1) throw std::invalid_argument("scheme dimension must be >= 1");
  if (k < 1) throw std::invalid_argument("scheme degree must be >= 1");
  return build_from_points(d, k, user_bary_points, true);
}

double lebesgue_constant(InterpolationScheme& scheme, int sampling_density) {
  if (sampling_density < 2) throw std::invalid_argument("sampling density too small");
  if (scheme.degree == 1) {
    // Linear Lagrange basis is the barycentric coordinates: nonnegative,
    // summing to one, so the constant is exactly 1.
    scheme.lebesgue = 1.0;
    scheme.lebesgue_density = sampling_density;
    scheme.lebesgue_argmax = Vec::Zero(scheme.dim);
    return 1.0;
  }
  const int d = scheme.dim;
  Vec best_ref = Vec::Zero(d);
  double best = 0.0;
  for (const Vec& b : principal_lattice(d, sampling_density)) {
    Vec r(d);
    for (int j = 0; j < d; ++j) r(j) = b(j + 1);
    const double v = scheme.basis_values(r).cwiseAbs().sum();
    if (v > best) {
      best = v;
      best_ref = r;
    }
  }
  // Local refinement: shrinking lattice clouds around the maximizer.
  std::mt19937_64 rng(1234567);
  std::exponential_distribution<double> expo(1.0);
  double radius = 1.0 / sampling_density;
  for (int round = 0; round < 30; ++round) {
    Vec center = best_ref;
    for (int probe = 0; probe < 120; ++probe) {
      Vec bary(d + 1);
      double tot = 0.0;
      for (int i = 0; i <= d; ++i) {
        bary(i) = expo(rng);
        tot += bary(i);
      }
      bary /= tot;
      Vec r(d);
      for (int j = 0; j < d; ++j) r(j) = bary(j + 1);
      Vec candidate = center + radius * (r - center);
      // Clip into the simplex.
      double sum = 0.0;
      for (int j = 0; j < d; ++j) {
        candidate(j) = std::max(0.0, candidate(j));
        sum += candidate(j);
      }
      if (sum > 1.0) candidate /= sum;
      const double v = scheme.basis_values(candidate).cwiseAbs().sum();
      if (v > best) {
        best = v;
        best_ref = candidate;
      }
    }
    radius *= 0.75;
  }
  scheme.lebesgue = best;
  scheme.lebesgue_density = sampling_density;
  scheme.lebesgue_argmax = best_ref;
  return best;
}

AffineMap affine_map(const std::vector<Vec>& verts) {
  const int d = static_cast<int>(verts[0].size());
  AffineMap m;
  m.origin = verts[0];
  m.edges.resize(d, d);
  for (int i = 0; i < d; ++i) m.edges.col(i) = verts[static_cast<size_t>(i) + 1] - verts[0];
  Eigen::PartialPivLU<Mat> lu(m.edges);
  m.det_edges = lu.determinant();
  if (m.det_edges == 0.0)
    throw std::domain_error("affine map of a degenerate simplex");
  m.inv_edges = lu.solve(Mat::Identity(d, d));
  return m;
}

Vec FieldInterpolant::eval(int elem, const Vec& x) const {
  const Vec ref = maps[static_cast<size_t>(elem)].to_reference(x);
  return samples[static_cast<size_t>(elem)].transpose() * scheme->basis_values(ref);
}

Mat FieldInterpolant::eval_ref(int elem, const Mat& basis_rows) const {
  return basis_rows * samples[static_cast<size_t>(elem)];
}

namespace {

FieldInterpolant sample_interpolant(const Mesh& mesh,
                                    std::shared_ptr<const InterpolationScheme> scheme,
                                    const std::function<Vec(const Vec&)>& fn,
                                    int components) {
  FieldInterpolant out;
  out.scheme = std::move(scheme);
  out.components = components;
  out.maps.reserve(mesh.simplices.size());
  out.samples.reserve(mesh.simplices.size());
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    AffineMap map = affine_map(verts);
    Mat vals(out.scheme->n_points, components);
    for (int j = 0; j < out.scheme->n_points; ++j) {
      const Vec x = map.to_physical(out.scheme->ref_points[static_cast<size_t>(j)]);
      const Vec v = fn(x);
      if (v.size() != components)
        throw std::runtime_error("field evaluation returned a wrong-sized vector");
      vals.row(j) = v.transpose();
    }
    out.maps.push_back(std::move(map));
    out.samples.push_back(std::move(vals));
  }
  return out;
}

}  // namespace

FieldInterpolant interpolate_gradient(const Mesh& mesh,
                                      std::shared_ptr<const InterpolationScheme> scheme,
                                      const ScalarField& v) {
  if (!v.gradient) throw std::invalid_argument("scalar field lacks a gradient evaluator");
  return sample_interpolant(mesh, std::move(scheme), v.gradient, mesh.dim);
}

FieldInterpolant interpolate_vector(const Mesh& mesh,
                                    std::shared_ptr<const InterpolationScheme> scheme,
                                    const VectorField& f) {
  return sample_interpolant(mesh, std::move(scheme), f.value, mesh.dim);
}

SurrogateResult best_approx_surrogate(const Mesh& mesh,
                                      std::shared_ptr<const InterpolationScheme> scheme,
                                      const std::function<Vec(const Vec&)>& target,
                                      int components,
                                      const SurrogateOptions& options) {
  const int density =
      options.sample_density > 0 ? options.sample_density : std::max(scheme->degree + 2, 4);
  const auto sample_bary = principal_lattice(scheme->dim, density);
  const Mat basis = scheme->basis_matrix(sample_bary);  // S x N
  const int s_count = static_cast<int>(sample_bary.size());
  const int n = scheme->n_points;

  SurrogateResult result;
  result.safety_factor = options.safety_factor;
  result.surrogate.scheme = scheme;
  result.surrogate.components = components;

  double sup_err = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    AffineMap map = affine_map(verts);
    Mat targets(s_count, components);
    for (int q = 0; q < s_count; ++q) {
      Vec ref(scheme->dim);
      for (int j = 0; j < scheme->dim; ++j) ref(j) = sample_bary[static_cast<size_t>(q)](j + 1);
      targets.row(q) = target(map.to_physical(ref)).transpose();
    }

    Mat coeffs(n, components);
    for (int c = 0; c < components; ++c) {
      const Vec t = targets.col(c);
      Vec w = Vec::Constant(s_count, 1.0 / s_count);
      Vec best_x(n);
      double best_max = std::numeric_limits<double>::infinity();
      double prev_max = std::numeric_limits<double>::infinity();
      bool converged = false;
      for (int it = 0; it < options.max_iterations; ++it) {
        const Mat wb = w.asDiagonal() * basis;
        const Mat normal = basis.transpose() * wb;
        const Vec rhs = wb.transpose() * t;
        const Vec x = normal.ldlt().solve(rhs);
        const Vec e = basis * x - t;
        const double max_err = e.cwiseAbs().maxCoeff();
        if (max_err < best_max) {
          best_max = max_err;
          best_x = x;
        }
        if (it > 3 && std::abs(max_err - prev_max) < 1e-12 * std::max(1.0, max_err)) {
          converged = true;
          break;
        }
        prev_max = max_err;
        w = w.cwiseProduct(e.cwiseAbs().array().max(1e-14 * std::max(1.0, max_err)).matrix());
        w /= w.sum();
      }
      if (!converged && options.max_iterations > 0) {
        // Lawson stalled: keep whichever of the best iterate and the plain
        // least-squares fit has the smaller sampled sup error.
        const Vec ls = (basis.transpose() * basis).ldlt().solve(basis.transpose() * t);
        const double ls_max = (basis * ls - t).cwiseAbs().maxCoeff();
        if (ls_max < best_max) {
          best_max = ls_max;
          best_x = ls;
        }
        result.exchange_converged = false;
      }
      coeffs.col(c) = best_x;
    }

    // Sampled sup of the Euclidean error of the fit.
    const Mat fit = basis * coeffs;
    for (int q = 0; q < s_count; ++q)
      sup_err = std::max(sup_err, (fit.row(q) - targets.row(q)).norm());

    result.surrogate.maps.push_back(std::move(map));
    result.surrogate.samples.push_back(std::move(coeffs));
  }
  result.certified_sup_error = sup_err * options.safety_factor;
  return result;
}

}  // namespace meshcert
