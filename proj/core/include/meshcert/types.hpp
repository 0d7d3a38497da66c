#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace meshcert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Vertex indices of a d-simplex (d+1 entries, distinct).
using SimplexVerts = std::vector<int>;

/// Scalar field with an analytic gradient, defined on the ambient space.
struct ScalarField {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

/// Vector field evaluator. `sup_hint`, when set, is an analytic bound on
/// sup_x |f(x)| valid on any subset of the ambient space (used instead of
/// sampled sup estimates).
struct VectorField {
  std::string name;
  std::function<Vec(const Vec&)> value;
  std::function<double(const std::vector<Vec>& hull_vertices)> sup_hint;
};

}  // namespace meshcert
