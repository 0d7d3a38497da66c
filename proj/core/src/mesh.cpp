#include <meshcert/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace meshcert {

std::vector<Vec> Mesh::simplex_points(int k) const {
  const SimplexVerts& s = simplices[static_cast<size_t>(k)];
  std::vector<Vec> pts;
  pts.reserve(s.size());
  for (int id : s) pts.push_back(points[static_cast<size_t>(id)]);
  return pts;
}

void Mesh::canonicalize() {
  for (auto& s : simplices) std::sort(s.begin(), s.end());
  std::sort(simplices.begin(), simplices.end());
}

std::map<std::vector<int>, std::vector<int>> facet_adjacency(const Mesh& mesh) {
  std::map<std::vector<int>, std::vector<int>> adj;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const SimplexVerts& s = mesh.simplices[k];
    for (size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<int> facet;
      facet.reserve(s.size() - 1);
      for (size_t i = 0; i < s.size(); ++i)
        if (i != drop) facet.push_back(s[i]);
      std::sort(facet.begin(), facet.end());
      adj[facet].push_back(static_cast<int>(k));
    }
  }
  return adj;
}

PseudoManifoldReport validate_pseudo_manifold(const Mesh& mesh) {
  PseudoManifoldReport report;
  if (mesh.simplices.empty())
    throw std::invalid_argument("pseudo-manifold validation of an empty mesh");
  for (const auto& [facet, cells] : facet_adjacency(mesh)) {
    const int count = static_cast<int>(cells.size());
    if (count != 1 && count != 2) report.bad_facets.emplace_back(facet, count);
  }
  report.pass = report.bad_facets.empty();
  return report;
}

double mesh_volume(const Mesh& mesh) {
  double vol = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k)
    vol += simplex_volume(mesh.simplex_points(static_cast<int>(k)));
  return vol;
}

double boundary_cone_volume(const Mesh& mesh) {
  const int d = mesh.dim;
  Vec anchor = Vec::Zero(d);
  for (const Vec& p : mesh.points) anchor += p;
  anchor /= static_cast<double>(mesh.points.size());

  double vol = 0.0;
  for (const auto& [facet, cells] : facet_adjacency(mesh)) {
    if (cells.size() != 1) continue;
    // Cone from the anchor over the boundary facet: |det| / d!.
    std::vector<Vec> pts;
    pts.reserve(facet.size() + 1);
    pts.push_back(anchor);
    for (int id : facet) pts.push_back(mesh.points[static_cast<size_t>(id)]);
    vol += simplex_volume(pts);
  }
  return vol;
}

NetParams measure_net(const std::vector<Vec>& points, double hull_volume_tol,
                      std::uint64_t seed, int mc_samples) {
  if (points.empty()) throw std::invalid_argument("measure_net: empty point set");
  const int d = static_cast<int>(points.front().size());
  if (static_cast<int>(points.size()) < d + 1)
    throw std::invalid_argument("measure_net: need at least d+1 points");

  NetParams net;
  net.eta = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      net.eta = std::min(net.eta, (points[i] - points[j]).norm());
  if (net.eta == 0.0)
    throw std::invalid_argument("measure_net: coincident points (eta = 0)");

  const Mesh mesh = delaunay(points);
  const double covered = mesh_volume(mesh);
  const double hull = boundary_cone_volume(mesh);
  if (std::abs(covered - hull) > hull_volume_tol * std::max(1.0, hull))
    throw std::runtime_error("measure_net: triangulation does not cover the hull");

  std::vector<double> volumes(mesh.simplices.size());
  double total = 0.0;
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    volumes[k] = simplex_volume(mesh.simplex_points(static_cast<int>(k)));
    total += volumes[k];
    const Ball mcc = min_containment_ball(mesh.simplex_points(static_cast<int>(k)));
    net.epsilon = std::max(net.epsilon, mcc.radius);
  }

  // Sampled lower bound: farthest-from-S point among uniform hull samples.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  for (int s = 0; s < mc_samples; ++s) {
    double pick = unif(rng) * total;
    size_t k = 0;
    while (k + 1 < volumes.size() && pick > volumes[k]) {
      pick -= volumes[k];
      ++k;
    }
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    Vec bary(d + 1);
    double bsum = 0.0;
    for (int i = 0; i <= d; ++i) {
      bary(i) = expo(rng);
      bsum += bary(i);
    }
    bary /= bsum;
    Vec x = Vec::Zero(d);
    for (int i = 0; i <= d; ++i) x += bary(i) * verts[static_cast<size_t>(i)];
    double nearest = std::numeric_limits<double>::infinity();
    for (const Vec& p : points) nearest = std::min(nearest, (x - p).norm());
    net.epsilon_lower = std::max(net.epsilon_lower, nearest);
  }
  if (net.epsilon_lower > net.epsilon * (1.0 + 1e-9))
    throw std::runtime_error("measure_net: covering-radius bounds fail to bracket");

  net.eta_bar = net.eta / net.epsilon;
  return net;
}

ProtectionReport protection(const Mesh& mesh) {
  ProtectionReport report;
  report.delta = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    const auto verts = mesh.simplex_points(static_cast<int>(k));
    const Ball cs = circumsphere(verts);
    const SimplexVerts& s = mesh.simplices[k];
    double delta_k = std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < mesh.points.size(); ++p) {
      if (std::find(s.begin(), s.end(), static_cast<int>(p)) != s.end()) continue;
      delta_k = std::min(delta_k, (mesh.points[p] - cs.center).norm() - cs.radius);
    }
    report.per_simplex.emplace_back(static_cast<int>(k), delta_k);
    report.delta = std::min(report.delta, delta_k);
    if (delta_k < -1e-12 * std::max(1.0, cs.radius)) report.delaunay_valid = false;
  }
  return report;
}

}  // namespace meshcert
