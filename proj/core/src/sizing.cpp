#include <meshcert/sizing.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace meshcert {

std::vector<ElementSizing> compute_zeta(const Mesh& mesh, const SizingField& field) {
  std::vector<double> vertex_values(mesh.points.size());
  for (size_t i = 0; i < mesh.points.size(); ++i) {
    vertex_values[i] = field.inv_d2(mesh.points[i]);
    if (!(vertex_values[i] > 0.0))
      throw std::domain_error("sizing field nonpositive at a mesh vertex");
  }

  std::vector<ElementSizing> out(mesh.simplices.size());
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto& s = mesh.simplices[k];
    ElementSizing es;
    es.min_vertex_value = std::numeric_limits<double>::infinity();
    es.max_vertex_value = -std::numeric_limits<double>::infinity();
    for (int id : s) {
      es.min_vertex_value = std::min(es.min_vertex_value, vertex_values[static_cast<size_t>(id)]);
      es.max_vertex_value = std::max(es.max_vertex_value, vertex_values[static_cast<size_t>(id)]);
    }
    const double diam = simplex_diameter(mesh.simplex_points(static_cast<int>(k)));
    if (diam == 0.0) throw std::domain_error("degenerate element (zero diameter)");
    es.inv_diam2 = 1.0 / (diam * diam);
    const double lo = es.min_vertex_value - es.inv_diam2;
    const double hi = es.max_vertex_value - es.inv_diam2;
    if (lo > 0.0)
      es.zeta = lo;
    else if (hi < 0.0)
      es.zeta = hi;
    else
      es.zeta = 0.0;
    out[k] = es;
  }
  return out;
}

double estimate_hessian_sup(const SizingField& field, const std::vector<Vec>& probes,
                            double step) {
  if (probes.empty()) throw std::invalid_argument("no Hessian probe points");
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const int d = static_cast<int>(probes.front().size());
  double sup = 0.0;
  Mat h(d, d);
  for (const Vec& x : probes) {
    const double f0 = field.inv_d2(x);
    for (int i = 0; i < d; ++i) {
      Vec ei = Vec::Zero(d);
      ei(i) = step;
      h(i, i) = (field.inv_d2(x + ei) - 2.0 * f0 + field.inv_d2(x - ei)) / (step * step);
      for (int j = i + 1; j < d; ++j) {
        Vec ej = Vec::Zero(d);
        ej(j) = step;
        const double mixed = (field.inv_d2(x + ei + ej) - field.inv_d2(x + ei - ej) -
                              field.inv_d2(x - ei + ej) + field.inv_d2(x - ei - ej)) /
                             (4.0 * step * step);
        h(i, j) = mixed;
        h(j, i) = mixed;
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    sup = std::max(sup, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return sup;
}

C3Breakdown constant_c3(const Mesh& mesh, const SizingField& field,
                        const NetParams& net, const C3Options& options) {
  if (!(net.eta > 0.0) || !(net.epsilon > 0.0))
    throw std::invalid_argument("constant_c3: missing net parameters");

  C3Breakdown br;

  double max_rmin = 0.0;
  double domain_diam = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto pts = mesh.simplex_points(static_cast<int>(k));
    max_rmin = std::max(max_rmin, min_containment_ball(pts).radius);
    domain_diam = std::max(domain_diam, simplex_diameter(pts));
  }
  for (size_t i = 0; i < mesh.points.size(); ++i)
    domain_diam = std::max(domain_diam, (mesh.points[i] - mesh.points[0]).norm());

  if (field.hessian_sup) {
    br.hessian_bound = *field.hessian_sup;
  } else {
    br.hessian_estimated = true;
    std::mt19937_64 rng(options.seed);
    const double step = options.fd_step_factor * domain_diam;
    std::vector<Vec> probes;
    probes.reserve(static_cast<size_t>(options.hessian_probes));
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<size_t> pick(0, mesh.simplices.size() - 1);
    while (static_cast<int>(probes.size()) < options.hessian_probes) {
      const auto verts = mesh.simplex_points(static_cast<int>(pick(rng)));
      Vec bary(verts.size());
      double tot = 0.0;
      for (size_t i = 0; i < verts.size(); ++i) {
        bary(static_cast<Eigen::Index>(i)) = expo(rng);
        tot += bary(static_cast<Eigen::Index>(i));
      }
      bary /= tot;
      Vec x = Vec::Zero(mesh.dim);
      for (size_t i = 0; i < verts.size(); ++i)
        x += bary(static_cast<Eigen::Index>(i)) * verts[i];
      probes.push_back(x);
    }
    br.hessian_bound = estimate_hessian_sup(field, probes, step);
  }

  if (field.sup_over_hull) {
    br.sup_term = field.sup_over_hull(mesh.points);
  } else {
    br.sup_estimated = true;
    std::mt19937_64 rng(options.seed ^ 0xabcdef);
    std::exponential_distribution<double> expo(1.0);
    double sup = 0.0;
    for (size_t k = 0; k < mesh.simplices.size(); ++k) {
      const auto verts = mesh.simplex_points(static_cast<int>(k));
      for (const Vec& v : verts) sup = std::max(sup, field.inv_d2(v));
      for (int s = 0; s < options.sup_samples_per_element; ++s) {
        Vec bary(verts.size());
        double tot = 0.0;
        for (size_t i = 0; i < verts.size(); ++i) {
          bary(static_cast<Eigen::Index>(i)) = expo(rng);
          tot += bary(static_cast<Eigen::Index>(i));
        }
        bary /= tot;
        Vec x = Vec::Zero(mesh.dim);
        for (size_t i = 0; i < verts.size(); ++i)
          x += bary(static_cast<Eigen::Index>(i)) * verts[i];
        sup = std::max(sup, field.inv_d2(x));
      }
    }
    br.sup_term = sup * options.safety_factor;
  }

  const auto zetas = compute_zeta(mesh, field);
  for (const auto& es : zetas) br.zeta_term = std::max(br.zeta_term, std::abs(es.zeta));

  br.smoothness_term = 0.5 * max_rmin * max_rmin * br.hessian_bound;
  const double first = br.smoothness_term + br.sup_term + br.zeta_term;
  const double cap = 1.0 / (net.eta * net.eta);
  br.separation_branch = cap < first;
  br.c3 = std::sqrt(std::min(first, cap));
  return br;
}

SizingField sizing_constant(double h0) {
  if (!(h0 > 0.0)) throw std::invalid_argument("sizing_constant: h0 must be positive");
  const double v = 1.0 / (h0 * h0);
  SizingField f;
  f.name = "constant";
  f.inv_d2 = [v](const Vec&) { return v; };
  f.hessian_sup = 0.0;
  f.sup_over_hull = [v](const std::vector<Vec>&) { return v; };
  return f;
}

SizingField sizing_affine(double c0, const Vec& gradient) {
  SizingField f;
  f.name = "affine";
  Vec g = gradient;
  f.inv_d2 = [c0, g](const Vec& x) { return c0 + g.dot(x); };
  f.hessian_sup = 0.0;
  // Affine functions attain their extremes at hull vertices.
  f.sup_over_hull = [c0, g](const std::vector<Vec>& pts) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const Vec& p : pts) sup = std::max(sup, c0 + g.dot(p));
    return sup;
  };
  return f;
}

SizingField sizing_radial_quadratic(double c0, double c1, const Vec& x0) {
  if (!(c0 > 0.0) || c1 < 0.0)
    throw std::invalid_argument("sizing_radial_quadratic: need c0 > 0, c1 >= 0");
  SizingField f;
  f.name = "radial-quadratic";
  Vec center = x0;
  f.inv_d2 = [c0, c1, center](const Vec& x) {
    return c0 + c1 * (x - center).squaredNorm();
  };
  f.hessian_sup = 2.0 * c1;
  // Convex, so the hull sup sits at a vertex.
  f.sup_over_hull = [c0, c1, center](const std::vector<Vec>& pts) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const Vec& p : pts)
      sup = std::max(sup, c0 + c1 * (p - center).squaredNorm());
    return sup;
  };
  return f;
}

}  // namespace meshcert
