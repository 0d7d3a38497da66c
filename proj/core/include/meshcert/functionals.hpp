#pragma once

#include <meshcert/interpolation.hpp>
#include <meshcert/mesh.hpp>
#include <meshcert/quadrature.hpp>
#include <meshcert/sizing.hpp>
#include <meshcert/types.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace meshcert {

/// Element-aware vector evaluator: callers that only have an ambient field
/// wrap it with ambient_field().
using ElementVectorFn = std::function<Vec(int elem, const Vec& x)>;

inline ElementVectorFn ambient_field(std::function<Vec(const Vec&)> f) {
  return [f = std::move(f)](int, const Vec& x) { return f(x); };
}

struct FunctionalOptions {
  int threads = 1;  // per-element partials are reduced in index order
};

/// Mesh roughness of a vector field w:
/// sqrt(sum_K diam(K)^-2 int_K sum_{i>j} (abs(w) . abs(edge_ij))^2 dV).
double roughness_functional(const Mesh& mesh, const ElementVectorFn& field,
                            const QuadratureRule& quad,
                            const FunctionalOptions& options = {});

/// Same functional applied to a free-standing vector field.
double edge_functional(const Mesh& mesh, const ElementVectorFn& field,
                       const QuadratureRule& quad,
                       const FunctionalOptions& options = {});

/// L2 norm of a vector field over the mesh.
double gradient_norm(const Mesh& mesh, const ElementVectorFn& field,
                     const QuadratureRule& quad,
                     const FunctionalOptions& options = {});

/// (Theta, Theta / ((d+1)(d+2))): the hypervolume-weighted sum of squared
/// edge lengths and its normalized variant.
std::pair<double, double> rajan_theta(const Mesh& mesh);

/// sqrt((d+1)/(2d)) * min_K (min elevation / diameter).
double constant_c1(const Mesh& mesh);

/// max_K sqrt(sum of squared edge lengths) / diameter; always >= 1.
double constant_c2(const Mesh& mesh);

/// Dirichlet energy int_Omega |grad v|^2 dV.
double roughness_energy(const Mesh& mesh, const ScalarField& v,
                        const QuadratureRule& quad,
                        const FunctionalOptions& options = {});

/// J(v) = int |grad v|^2 - 2 int f v.
double energy_J(const Mesh& mesh, const ScalarField& v, const ScalarField& forcing,
                const QuadratureRule& quad, const FunctionalOptions& options = {});

struct SupNormOptions {
  int lattice_order = 0;   // 0 -> 20/27/35 for d = 1/2/3 (about 20^d points)
  int mc_samples = 10000;  // per element, used for d >= 4
  double safety_factor = 1.05;
  std::uint64_t seed = 11;
};

/// Dense-sample estimate of sup_x |w(x)| over the mesh, inflated by the
/// safety factor so that upper-bound checks stay sound.
double sup_norm_estimate(const Mesh& mesh, const ElementVectorFn& field,
                         const SupNormOptions& options = {});

struct CheckResult {
  std::string check_id;
  std::string anchor;  // stable identifier of the inequality family
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double tightness = 0.0;  // rhs / lhs; near 1 means the bound is tight
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Equivalence sandwich C1 ||w|| <= Psi(w) <= C2 ||w|| for each test field,
/// allowing the stated relative slack.
VerificationReport verify_equivalence(const Mesh& mesh,
                                      const std::vector<ElementVectorFn>& fields,
                                      const QuadratureRule& quad,
                                      double relative_slack = 1e-9,
                                      const FunctionalOptions& options = {});

/// Psi(w) <= C3 sqrt(Theta) sup|w| and ||w|| <= (C3 sqrt(Theta)/C1) sup|w|.
VerificationReport verify_upper_bound(const Mesh& mesh, const ElementVectorFn& field,
                                      const SizingField& sizing, const NetParams& net,
                                      const QuadratureRule& quad,
                                      const SupNormOptions& sup_options = {},
                                      const FunctionalOptions& options = {});

struct ErrorEstimateInputs {
  std::shared_ptr<const InterpolationScheme> scheme;  // lebesgue must be set
  SizingField sizing;
  NetParams net;
  QuadratureRule quad;
  SurrogateOptions surrogate;
  FunctionalOptions functional;
};

/// Gradient-interpolation error chain:
/// Psi(grad v - (grad v)_h) <= (1 + Lambda) C3 sqrt(Theta) E-hat and
/// ||grad v - (grad v)_h|| <= ((1 + Lambda) C3 sqrt(Theta) / C1) E-hat.
VerificationReport verify_error_estimates(const Mesh& mesh, const ScalarField& v,
                                          const ErrorEstimateInputs& inputs);

/// The same chain for a vector field in place of the gradient.
VerificationReport verify_error_estimates_vector(const Mesh& mesh,
                                                 const VectorField& f,
                                                 const ErrorEstimateInputs& inputs);

/// Everything the report command emits.
struct QualityReport {
  int dim = 0;
  int degree = 0;
  std::size_t n_points = 0;
  std::size_t n_simplices = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  C3Breakdown c3;
  double theta = 0.0;
  double theta_hat = 0.0;
  double lambda = 0.0;
  double xi_min = 0.0;
  double delta = 0.0;  // +inf when the mesh has no external points
  bool delaunay_valid = true;
  NetParams net;
  // Evaluated right-hand sides of the bound chain for the configured field.
  std::map<std::string, double> bound_chain;
};

QualityReport quality_report(const Mesh& mesh, const ScalarField& v,
                             const SizingField& sizing, int degree,
                             const QuadratureRule& quad,
                             const SupNormOptions& sup_options = {},
                             const SurrogateOptions& surrogate_options = {});

}  // namespace meshcert
