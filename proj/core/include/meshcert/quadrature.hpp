#pragma once

#include <meshcert/types.hpp>

#include <functional>
#include <vector>

namespace meshcert {

/// Quadrature rule on the reference d-simplex. Nodes are barycentric tuples
/// (d+1 entries each); weights sum to 1, i.e. the reference-simplex measure
/// 1/d! is normalized out. An integral over a physical simplex K is
/// |K| * sum_i w_i f(x(node_i)).
struct QuadratureRule {
  int dim = 0;
  int exact_degree = 0;
  std::vector<Vec> nodes;  // barycentric, size d+1
  std::vector<double> weights;
};

enum class QuadratureFamily {
  ConicalProduct,    // Gauss-Jacobi tensor rule via the Duffy map; positive weights
  GrundmannMoeller,  // simplex rule with alternating-sign weights
};

/// Rule exact for all polynomials of total degree <= degree on the reference
/// simplex, generated at startup for arbitrary d. Degrees above 30 are
/// rejected (the generators stay well-conditioned up to that cap).
QuadratureRule simplex_quadrature(int d, int degree,
                                  QuadratureFamily family = QuadratureFamily::ConicalProduct);

/// Cartesian point of a barycentric tuple with respect to simplex vertices.
Vec barycentric_to_point(const std::vector<Vec>& verts, const Vec& bary);

/// Integral of f over the physical simplex with the given vertices.
double integrate_simplex(const QuadratureRule& rule, const std::vector<Vec>& verts,
                         const std::function<double(const Vec&)>& f);

/// Exact integral of the monomial prod x_i^{alpha_i} over the reference
/// simplex: prod(alpha_i!) / (|alpha| + d)!.
double reference_monomial_integral(const std::vector<int>& alpha);

}  // namespace meshcert
