#pragma once

#include <meshcert/geometry.hpp>
#include <meshcert/types.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace meshcert {

/// Simplicial mesh: a point store plus d-simplices. Simplices are stored
/// with sorted vertex ids and the simplex list itself is sorted, so meshes
/// built from the same input are bytewise identical.
struct Mesh {
  int dim = 0;
  std::vector<Vec> points;
  std::vector<SimplexVerts> simplices;

  std::vector<Vec> simplex_points(int k) const;
  void canonicalize();
};

/// Map from each (d-1)-face (sorted vertex ids) to the incident simplices.
std::map<std::vector<int>, std::vector<int>> facet_adjacency(const Mesh& mesh);

struct PseudoManifoldReport {
  bool pass = false;
  // Facets whose incidence count is neither 1 nor 2, with that count.
  std::vector<std::pair<std::vector<int>, int>> bad_facets;
};

/// Every (d-1)-face must border exactly one or two d-simplices.
PseudoManifoldReport validate_pseudo_manifold(const Mesh& mesh);

/// Sum of simplex hypervolumes.
double mesh_volume(const Mesh& mesh);

/// Hypervolume of the mesh boundary region, computed from the boundary
/// facets by coning to an interior reference point. Agrees with
/// mesh_volume() when the mesh triangulates its hull without gaps or
/// overlaps.
double boundary_cone_volume(const Mesh& mesh);

struct NetParams {
  double epsilon = 0.0;        // certified upper bound on the covering radius
  double epsilon_lower = 0.0;  // Monte Carlo lower bound (bracket partner)
  double eta = 0.0;            // exact minimum pairwise separation
  double eta_bar = 0.0;        // eta / epsilon
};

/// Net parameters of a point set over its own convex hull. eta is exact by
/// pairwise scan. epsilon is the maximum min-containment radius over the
/// Delaunay simplices of the set, which bounds the covering radius from
/// above; a sampled lower bound is reported alongside and the pair must
/// bracket.
NetParams measure_net(const std::vector<Vec>& points,
                      double hull_volume_tol = 1e-8,
                      std::uint64_t seed = 20'240'101ULL,
                      int mc_samples = 100'000);

struct ProtectionReport {
  double delta = 0.0;                              // min over simplices
  std::vector<std::pair<int, double>> per_simplex; // (simplex id, delta_K)
  // False when some delta_K is below the numeric slack (-1e-12 relative),
  // meaning the mesh is not Delaunay for its own point set. Values are
  // reported raw, never clamped.
  bool delaunay_valid = true;
};

/// Per-simplex protection delta_K = min over points p outside K of
/// |p - c_K| - R_K, and the mesh-wide minimum.
ProtectionReport protection(const Mesh& mesh);

/// d-dimensional Delaunay triangulation by incremental insertion with
/// conflict-region search. Exact adaptive predicates; points exactly on a
/// circumsphere are treated as non-conflicting, so cospherical ties resolve
/// by insertion (index) order and the output is deterministic.
Mesh delaunay(const std::vector<Vec>& points);

/// Patch of the Coxeter triangulation of type A~_d: all alcoves of the
/// reflection arrangement contained in the region {y in H : max_i y_i -
/// min_j y_j <= layers}, mapped isometrically from the hyperplane H (sum of
/// coordinates zero in R^{d+1}) to R^d and scaled. All simplices are
/// congruent; for d = 2 they are equilateral triangles. Supported for
/// 2 <= d <= 6.
Mesh coxeter_a_tilde(int d, int layers, double scale = 1.0);

}  // namespace meshcert
