#include <meshcert/functionals.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace meshcert {

namespace {

// Deterministic parallel map over elements: each index writes its own slot,
// the caller reduces in index order afterwards.
void parallel_elements(size_t n, int threads, const std::function<void(size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int t = std::min<int>(threads, static_cast<int>(n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(t));
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = static_cast<size_t>(w); i < n; i += static_cast<size_t>(t)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct ElementData {
  std::vector<Vec> verts;
  double volume = 0.0;
  double diameter = 0.0;
  Mat abs_edges;  // d(d+1)/2 rows of componentwise-absolute edge vectors
  double edge_sq_sum = 0.0;
};

ElementData element_data(const Mesh& mesh, size_t k) {
  ElementData e;
  e.verts = mesh.simplex_points(static_cast<int>(k));
  e.volume = simplex_volume(e.verts);
  e.diameter = simplex_diameter(e.verts);
  if (e.diameter == 0.0) throw std::domain_error("degenerate element (zero diameter)");
  const int d = static_cast<int>(e.verts[0].size());
  const int n_edges = d * (d + 1) / 2;
  e.abs_edges.resize(n_edges, d);
  int row = 0;
  for (size_t i = 0; i < e.verts.size(); ++i)
    for (size_t j = i + 1; j < e.verts.size(); ++j) {
      const Vec edge = e.verts[j] - e.verts[i];
      e.abs_edges.row(row++) = edge.cwiseAbs().transpose();
      e.edge_sq_sum += edge.squaredNorm();
    }
  return e;
}

// Integrand of Psi^2 at one point: sum over edges of (abs(w) . abs(edge))^2.
double psi_integrand(const ElementData& e, const Vec& w) {
  return (e.abs_edges * w.cwiseAbs()).squaredNorm();
}

double psi_squared(const Mesh& mesh, const ElementVectorFn& field,
                   const QuadratureRule& quad, const FunctionalOptions& options) {
  std::vector<double> partial(mesh.simplices.size(), 0.0);
  parallel_elements(mesh.simplices.size(), options.threads, [&](size_t k) {
    const ElementData e = element_data(mesh, k);
    double acc = 0.0;
    for (size_t q = 0; q < quad.nodes.size(); ++q) {
      const Vec x = barycentric_to_point(e.verts, quad.nodes[q]);
      acc += quad.weights[q] * psi_integrand(e, field(static_cast<int>(k), x));
    }
    partial[k] = e.volume * acc / (e.diameter * e.diameter);
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double l2_squared(const Mesh& mesh, const ElementVectorFn& field,
                  const QuadratureRule& quad, const FunctionalOptions& options) {
  std::vector<double> partial(mesh.simplices.size(), 0.0);
  parallel_elements(mesh.simplices.size(), options.threads, [&](size_t k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    const double vol = simplex_volume(verts);
    double acc = 0.0;
    for (size_t q = 0; q < quad.nodes.size(); ++q) {
      const Vec x = barycentric_to_point(verts, quad.nodes[q]);
      acc += quad.weights[q] * field(static_cast<int>(k), x).squaredNorm();
    }
    partial[k] = vol * acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

int default_lattice_order(int d) {
  switch (d) {
    case 1: return 20;
    case 2: return 27;
    default: return 35;
  }
}

}  // namespace

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

double roughness_functional(const Mesh& mesh, const ElementVectorFn& field,
                            const QuadratureRule& quad, const FunctionalOptions& options) {
  return std::sqrt(psi_squared(mesh, field, quad, options));
}

double edge_functional(const Mesh& mesh, const ElementVectorFn& field,
                       const QuadratureRule& quad, const FunctionalOptions& options) {
  return std::sqrt(psi_squared(mesh, field, quad, options));
}

double gradient_norm(const Mesh& mesh, const ElementVectorFn& field,
                     const QuadratureRule& quad, const FunctionalOptions& options) {
  return std::sqrt(l2_squared(mesh, field, quad, options));
}

std::pair<double, double> rajan_theta(const Mesh& mesh) {
  double theta = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    double edge_sq = 0.0;
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        edge_sq += (verts[j] - verts[i]).squaredNorm();
    theta += edge_sq * simplex_volume(verts);
  }
  const int d = mesh.dim;
  return {theta, theta / ((d + 1.0) * (d + 2.0))};
}

double constant_c1(const Mesh& mesh) {
  const int d = mesh.dim;
  double worst = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    const auto g = analyze_simplex(verts);
    if (g.degenerate) throw std::domain_error("constant_c1: degenerate element");
    const double min_elev = *std::min_element(g.elevations.begin(), g.elevations.end());
    worst = std::min(worst, min_elev / g.diameter);
  }
  return std::sqrt((d + 1.0) / (2.0 * d)) * worst;
}

double constant_c2(const Mesh& mesh) {
  double best = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    double edge_sq = 0.0;
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        edge_sq += (verts[j] - verts[i]).squaredNorm();
    best = std::max(best, std::sqrt(edge_sq) / simplex_diameter(verts));
  }
  return best;
}

double roughness_energy(const Mesh& mesh, const ScalarField& v,
                        const QuadratureRule& quad, const FunctionalOptions& options) {
  if (!v.gradient) throw std::invalid_argument("roughness_energy: field lacks a gradient");
  std::vector<double> partial(mesh.simplices.size(), 0.0);
  parallel_elements(mesh.simplices.size(), options.threads, [&](size_t k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    const double vol = simplex_volume(verts);
    double acc = 0.0;
    for (size_t q = 0; q < quad.nodes.size(); ++q) {
      const Vec x = barycentric_to_point(verts, quad.nodes[q]);
      acc += quad.weights[q] * v.gradient(x).squaredNorm();
    }
    partial[k] = vol * acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double energy_J(const Mesh& mesh, const ScalarField& v, const ScalarField& forcing,
                const QuadratureRule& quad, const FunctionalOptions& options) {
  const double a = roughness_energy(mesh, v, quad, options);
  std::vector<double> partial(mesh.simplices.size(), 0.0);
  parallel_elements(mesh.simplices.size(), options.threads, [&](size_t k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    const double vol = simplex_volume(verts);
    double acc = 0.0;
    for (size_t q = 0; q < quad.nodes.size(); ++q) {
      const Vec x = barycentric_to_point(verts, quad.nodes[q]);
      acc += quad.weights[q] * forcing.value(x) * v.value(x);
    }
    partial[k] = vol * acc;
  });
  double load = 0.0;
  for (double p : partial) load += p;
  return a - 2.0 * load;
}

double sup_norm_estimate(const Mesh& mesh, const ElementVectorFn& field,
                         const SupNormOptions& options) {
  const int d = mesh.dim;
  double sup = 0.0;
  if (d <= 3) {
    const int order =
        options.lattice_order > 0 ? options.lattice_order : default_lattice_order(d);
    // Reference lattice shared by all elements.
    std::vector<Vec> lattice;
    {
      std::vector<int> alpha(static_cast<size_t>(d) + 1, 0);
      alpha[0] = order;
      while (true) {
        Vec b(d + 1);
        for (int i = 0; i <= d; ++i)
          b(i) = static_cast<double>(alpha[static_cast<size_t>(i)]) / order;
        lattice.push_back(b);
        int i = 0;
        while (i < d && alpha[static_cast<size_t>(i)] == 0) ++i;
        if (i == d) break;
        const int v = alpha[static_cast<size_t>(i)];
        alpha[static_cast<size_t>(i)] = 0;
        alpha[0] = v - 1;
        ++alpha[static_cast<size_t>(i) + 1];
      }
    }
    for (size_t k = 0; k < mesh.simplices.size(); ++k) {
      const auto verts = mesh.simplex_points(static_cast<int>(k));
      for (const Vec& b : lattice)
        sup = std::max(sup,
                       field(static_cast<int>(k), barycentric_to_point(verts, b)).norm());
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::exponential_distribution<double> expo(1.0);
    for (size_t k = 0; k < mesh.simplices.size(); ++k) {
      const auto verts = mesh.simplex_points(static_cast<int>(k));
      for (const Vec& v : verts)
        sup = std::max(sup, field(static_cast<int>(k), v).norm());
      for (int s = 0; s < options.mc_samples; ++s) {
        Vec bary(d + 1);
        double tot = 0.0;
        for (int i = 0; i <= d; ++i) {
          bary(i) = expo(rng);
          tot += bary(i);
        }
        bary /= tot;
        sup = std::max(sup,
                       field(static_cast<int>(k), barycentric_to_point(verts, bary)).norm());
      }
    }
  }
  return sup * options.safety_factor;
}

VerificationReport verify_equivalence(const Mesh& mesh,
                                      const std::vector<ElementVectorFn>& fields,
                                      const QuadratureRule& quad, double relative_slack,
                                      const FunctionalOptions& options) {
  if (fields.empty()) throw std::invalid_argument("verify_equivalence: no test fields");
  const double c1 = constant_c1(mesh);
  const double c2 = constant_c2(mesh);
  VerificationReport report;
  for (size_t f = 0; f < fields.size(); ++f) {
    const double psi = roughness_functional(mesh, fields[f], quad, options);
    const double norm = gradient_norm(mesh, fields[f], quad, options);
    CheckResult lower;
    lower.check_id = "equivalence-lower/field" + std::to_string(f);
    lower.anchor = "functional-equivalence";
    lower.lhs = c1 * norm;
    lower.rhs = psi;
    lower.pass = lower.lhs <= lower.rhs * (1.0 + relative_slack);
    lower.tightness = (lower.lhs > 0.0) ? lower.rhs / lower.lhs : 1.0;
    report.checks.push_back(lower);

    CheckResult upper;
    upper.check_id = "equivalence-upper/field" + std::to_string(f);
    upper.anchor = "functional-equivalence";
    upper.lhs = psi;
    upper.rhs = c2 * norm;
    upper.pass = upper.lhs <= upper.rhs * (1.0 + relative_slack);
    upper.tightness = (upper.lhs > 0.0) ? upper.rhs / upper.lhs : 1.0;
    report.checks.push_back(upper);
  }
  return report;
}

VerificationReport verify_upper_bound(const Mesh& mesh, const ElementVectorFn& field,
                                      const SizingField& sizing, const NetParams& net,
                                      const QuadratureRule& quad,
                                      const SupNormOptions& sup_options,
                                      const FunctionalOptions& options) {
  const double c1 = constant_c1(mesh);
  const auto c3 = constant_c3(mesh, sizing, net);
  const auto [theta, theta_hat] = rajan_theta(mesh);
  const double sup = sup_norm_estimate(mesh, field, sup_options);
  const double psi = roughness_functional(mesh, field, quad, options);
  const double norm = gradient_norm(mesh, field, quad, options);

  VerificationReport report;
  CheckResult a;
  a.check_id = "roughness-sup-bound";
  a.anchor = "roughness-sup-bound";
  a.lhs = psi;
  a.rhs = c3.c3 * std::sqrt(theta) * sup;
  a.pass = a.lhs <= a.rhs * (1.0 + 1e-12);
  a.tightness = (a.lhs > 0.0) ? a.rhs / a.lhs : 1.0;
  report.checks.push_back(a);

  CheckResult b;
  b.check_id = "gradient-norm-sup-bound";
  b.anchor = "gradient-norm-sup-bound";
  b.lhs = norm;
  b.rhs = c3.c3 * std::sqrt(theta) / c1 * sup;
  b.pass = b.lhs <= b.rhs * (1.0 + 1e-12);
  b.tightness = (b.lhs > 0.0) ? b.rhs / b.lhs : 1.0;
  report.checks.push_back(b);
  return report;
}

namespace {

VerificationReport error_estimate_checks(const Mesh& mesh, const FieldInterpolant& interp,
                                         const std::function<Vec(const Vec&)>& exact,
                                         const char* tag,
                                         const ErrorEstimateInputs& inputs) {
  if (!(inputs.scheme->lebesgue > 0.0))
    throw std::invalid_argument("error estimates need a scheme with a Lebesgue estimate");
  const double c1 = constant_c1(mesh);
  const auto c3 = constant_c3(mesh, inputs.sizing, inputs.net);
  const auto [theta, theta_hat] = rajan_theta(mesh);
  const double lambda = inputs.scheme->lebesgue;

  const auto surrogate =
      best_approx_surrogate(mesh, inputs.scheme, exact, mesh.dim, inputs.surrogate);
  const double e_hat = surrogate.certified_sup_error;

  const ElementVectorFn error_field = [&](int elem, const Vec& x) -> Vec {
    return exact(x) - interp.eval(elem, x);
  };

  const double psi_err =
      roughness_functional(mesh, error_field, inputs.quad, inputs.functional);
  const double l2_err = gradient_norm(mesh, error_field, inputs.quad, inputs.functional);

  VerificationReport report;
  CheckResult a;
  a.check_id = std::string(tag) + "-functional";
  a.anchor = std::string(tag) + "-error-estimate";
  a.lhs = psi_err;
  a.rhs = (1.0 + lambda) * c3.c3 * std::sqrt(theta) * e_hat;
  a.pass = a.lhs <= a.rhs * (1.0 + 1e-12) + 1e-300;
  a.tightness = (a.lhs > 0.0) ? a.rhs / a.lhs : 1.0;
  report.checks.push_back(a);

  CheckResult b;
  b.check_id = std::string(tag) + "-norm";
  b.anchor = std::string(tag) + "-error-estimate";
  b.lhs = l2_err;
  b.rhs = (1.0 + lambda) * c3.c3 * std::sqrt(theta) / c1 * e_hat;
  b.pass = b.lhs <= b.rhs * (1.0 + 1e-12) + 1e-300;
  b.tightness = (b.lhs > 0.0) ? b.rhs / b.lhs : 1.0;
  report.checks.push_back(b);
  return report;
}

}  // namespace

VerificationReport verify_error_estimates(const Mesh& mesh, const ScalarField& v,
                                          const ErrorEstimateInputs& inputs) {
  const FieldInterpolant interp = interpolate_gradient(mesh, inputs.scheme, v);
  return error_estimate_checks(mesh, interp, v.gradient, "gradient", inputs);
}

VerificationReport verify_error_estimates_vector(const Mesh& mesh, const VectorField& f,
                                                 const ErrorEstimateInputs& inputs) {
  const FieldInterpolant interp = interpolate_vector(mesh, inputs.scheme, f);
  return error_estimate_checks(mesh, interp, f.value, "vector", inputs);
}

QualityReport quality_report(const Mesh& mesh, const ScalarField& v,
                             const SizingField& sizing, int degree,
                             const QuadratureRule& quad,
                             const SupNormOptions& sup_options,
                             const SurrogateOptions& surrogate_options) {
  QualityReport r;
  r.dim = mesh.dim;
  r.degree = degree;
  r.n_points = mesh.points.size();
  r.n_simplices = mesh.simplices.size();
  r.c1 = constant_c1(mesh);
  r.c2 = constant_c2(mesh);
  std::tie(r.theta, r.theta_hat) = rajan_theta(mesh);

  r.xi_min = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < mesh.simplices.size(); ++k)
    r.xi_min = std::min(r.xi_min,
                        analyze_simplex(mesh.simplex_points(static_cast<int>(k))).thickness);

  const auto prot = protection(mesh);
  r.delta = prot.delta;
  r.delaunay_valid = prot.delaunay_valid;
  r.net = measure_net(mesh.points, 1e-6, 13, 20000);
  r.c3 = constant_c3(mesh, sizing, r.net);

  auto scheme = std::make_shared<InterpolationScheme>(build_scheme(mesh.dim, degree));
  lebesgue_constant(*scheme);
  r.lambda = scheme->lebesgue;

  const ElementVectorFn w = ambient_field(v.gradient);
  const double norm = gradient_norm(mesh, w, quad);
  const double sup = sup_norm_estimate(mesh, w, sup_options);
  const auto surrogate =
      best_approx_surrogate(mesh, scheme, v.gradient, mesh.dim, surrogate_options);
  const double e_hat = surrogate.certified_sup_error;
  const double root_theta = std::sqrt(r.theta);

  r.bound_chain["equivalence_lower_rhs"] = r.c1 * norm;
  r.bound_chain["equivalence_upper_rhs"] = r.c2 * norm;
  r.bound_chain["roughness_sup_bound_rhs"] = r.c3.c3 * root_theta * sup;
  r.bound_chain["gradient_error_bound_rhs"] =
      (1.0 + r.lambda) * r.c3.c3 * root_theta / r.c1 * e_hat;
  r.bound_chain["vector_error_bound_rhs"] =
      (1.0 + r.lambda) * r.c3.c3 * root_theta / r.c1 * e_hat;
  return r;
}

}  // namespace meshcert
