#pragma once

#include <meshcert/mesh.hpp>
#include <meshcert/types.hpp>

#include <functional>
#include <memory>
#include <vector>

namespace meshcert {

/// Degree-k Lagrange basis on the reference d-simplex. Lagrange polynomials
/// are expressed in a degree-graded L2-orthonormal simplex basis (itself a
/// triangular combination of monomials), which keeps the nodal solve well
/// conditioned for k up to ~8.
struct InterpolationScheme {
  int dim = 0;
  int degree = 0;
  int n_points = 0;                 // (k+d)! / (k! d!)
  std::vector<Vec> bary_points;     // interpolation nodes, barycentric (d+1)
  std::vector<Vec> ref_points;      // same nodes in reference coordinates (d)
  std::vector<std::vector<int>> exponents;  // graded monomial multi-indices
  Mat ortho_coeffs;                 // phi = ortho_coeffs * monomials (lower tri)
  Mat basis_coeffs;                 // L_j = sum_m basis_coeffs(j,m) phi_m
  double condition_number = 0.0;    // of the nodal matrix in the phi basis
  double lebesgue = 0.0;            // sampled lower bound, set by lebesgue_constant
  int lebesgue_density = 0;
  Vec lebesgue_argmax;              // reference point achieving the estimate

  /// Values of all Lagrange polynomials at a reference point.
  Vec basis_values(const Vec& ref) const;
  /// Rows: one barycentric query point each; columns: Lagrange basis.
  Mat basis_matrix(const std::vector<Vec>& bary_queries) const;
};

/// Equispaced principal-lattice scheme of degree k >= 1.
InterpolationScheme build_scheme(int d, int k);

/// User-supplied interpolation nodes (barycentric tuples). Throws when the
/// set is not unisolvent (nodal matrix condition number above 1e12).
InterpolationScheme build_scheme(int d, int k, const std::vector<Vec>& user_bary_points);

/// Lower-bound estimate of the Lebesgue constant max_xi sum_j |L_j(xi)| by
/// dense principal-lattice sampling of the given density plus local
/// refinement around the maximizer. Stores the estimate and density into the
/// scheme and returns it. For k = 1 the basis is the barycentric coordinates
/// and the constant is exactly 1.
double lebesgue_constant(InterpolationScheme& scheme, int sampling_density = 64);

/// Affine reference-to-physical map of a simplex.
struct AffineMap {
  Vec origin;
  Mat edges;      // columns p_i - p_0
  Mat inv_edges;
  double det_edges = 0.0;  // equals +- d! |K|

  Vec to_physical(const Vec& ref) const { return origin + edges * ref; }
  Vec to_reference(const Vec& x) const { return inv_edges * (x - origin); }
};

AffineMap affine_map(const std::vector<Vec>& verts);

/// Piecewise polynomial interpolant of a vector-valued target: per-simplex
/// samples at the mapped interpolation points, evaluated through the
/// reference Lagrange basis.
struct FieldInterpolant {
  std::shared_ptr<const InterpolationScheme> scheme;
  int components = 0;
  std::vector<AffineMap> maps;   // per simplex
  std::vector<Mat> samples;      // per simplex: n_points x components

  /// Evaluate on a known element.
  Vec eval(int elem, const Vec& x) const;
  /// Evaluate at precomputed basis rows (Q x n_points) -> Q x components.
  Mat eval_ref(int elem, const Mat& basis_rows) const;
};

/// Interpolate the gradient of a scalar field component-by-component.
FieldInterpolant interpolate_gradient(const Mesh& mesh,
                                      std::shared_ptr<const InterpolationScheme> scheme,
                                      const ScalarField& v);

/// Interpolate a vector field.
FieldInterpolant interpolate_vector(const Mesh& mesh,
                                    std::shared_ptr<const InterpolationScheme> scheme,
                                    const VectorField& f);

struct SurrogateOptions {
  int sample_density = 0;      // 0 -> max(degree + 2, 4)
  double safety_factor = 1.05; // inflation of the sampled sup error
  int max_iterations = 60;     // Lawson reweighting steps per component
};

struct SurrogateResult {
  FieldInterpolant surrogate;
  double certified_sup_error = 0.0;  // E-hat >= inf over the space (weakened)
  bool exchange_converged = true;    // false -> least-squares fallback used
  double safety_factor = 1.05;
};

/// Discrete-minimax surrogate for the best sup-norm approximation of a
/// vector target over each element. The certified error is the sup-sample
/// error of the returned fit inflated by the safety factor; the true best
/// approximation error never exceeds it.
SurrogateResult best_approx_surrogate(const Mesh& mesh,
                                      std::shared_ptr<const InterpolationScheme> scheme,
                                      const std::function<Vec(const Vec&)>& target,
                                      int components,
                                      const SurrogateOptions& options = {});

}  // namespace meshcert
