#pragma once

#include <meshcert/mesh.hpp>
#include <meshcert/types.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace meshcert {

/// Sizing field, handled through the squared reciprocal 1/D^2(x) (positive,
/// C^2). Analytic bounds are preferred wherever the field can supply them;
/// otherwise sampled estimates are used and flagged.
struct SizingField {
  std::string name;
  std::function<double(const Vec&)> inv_d2;  // 1/D^2, units 1/length^2
  // Analytic bound on the bidirectional second-derivative sup (spectral norm
  // of the Hessian of 1/D^2 over the domain), units 1/length^4.
  std::optional<double> hessian_sup;
  // Analytic sup of 1/D^2 over the convex hull of the given vertices.
  std::function<double(const std::vector<Vec>&)> sup_over_hull;
};

/// Per-element sizing mismatch. zeta is the minimum-magnitude value in the
/// feasible interval [min_i v_i - 1/diam^2, max_i v_i - 1/diam^2], where the
/// v_i are the vertex values of 1/D^2; it is 0 whenever the interval
/// contains 0, so the mesh-wide max |zeta| is as small as the constraints
/// permit.
struct ElementSizing {
  double zeta = 0.0;
  double min_vertex_value = 0.0;
  double max_vertex_value = 0.0;
  double inv_diam2 = 0.0;
};

std::vector<ElementSizing> compute_zeta(const Mesh& mesh, const SizingField& field);

/// Max over probe points of the spectral norm of the central-difference
/// Hessian of 1/D^2 (for a symmetric Hessian this equals the sup over unit
/// directions u1, u2 of |u1^T H u2|). `step` is the finite-difference step.
double estimate_hessian_sup(const SizingField& field, const std::vector<Vec>& probes,
                            double step);

struct C3Options {
  double safety_factor = 1.05;  // inflation of sampled sup estimates
  int sup_samples_per_element = 64;
  int hessian_probes = 1000;
  double fd_step_factor = 1e-4;  // times the domain diameter
  std::uint64_t seed = 7;
};

struct C3Breakdown {
  double c3 = 0.0;
  bool separation_branch = false;  // true when the 1/eta^2 cap is active
  double smoothness_term = 0.0;    // 0.5 max R_min^2 * hessian bound
  double sup_term = 0.0;           // sup of 1/D^2 over the domain
  double zeta_term = 0.0;          // max |zeta_K|
  double hessian_bound = 0.0;
  bool hessian_estimated = false;  // finite differences rather than analytic
  bool sup_estimated = false;      // sampled rather than analytic
};

/// C3 = sqrt(min(0.5 max_K R_{K,min}^2 * H + sup(1/D^2) + max_K |zeta_K|,
/// 1/eta^2)), with which branch was active.
C3Breakdown constant_c3(const Mesh& mesh, const SizingField& field,
                        const NetParams& net, const C3Options& options = {});

/// Named built-ins selectable from the CLI.
SizingField sizing_constant(double h0);
/// 1/D^2(x) = c0 + g . x (must stay positive over the domain).
SizingField sizing_affine(double c0, const Vec& gradient);
/// 1/D^2(x) = c0 + c1 |x - x0|^2 with c0 > 0, c1 >= 0.
SizingField sizing_radial_quadratic(double c0, double c1, const Vec& x0);

}  // namespace meshcert
