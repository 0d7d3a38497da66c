#pragma once

#include <meshcert/types.hpp>

#include <utility>
#include <vector>

namespace meshcert {

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Derived per-simplex quantities. `elevations[s]` is the distance from
/// vertex s to the affine hull of its opposite facet; `facet_volumes[s]` is
/// the (d-1)-volume of that facet. A simplex counts as degenerate when
/// volume < 1e-12 * diameter^d.
struct SimplexGeometry {
  int dim = 0;
  double volume = 0.0;
  double diameter = 0.0;  // longest edge
  std::vector<double> elevations;
  std::vector<double> facet_volumes;
  double thickness = 0.0;  // min elevation / (d * diameter)
  Vec circumcenter;
  double circumradius = 0.0;
  Vec mcc_center;
  double mcc_radius = 0.0;  // min-containment (smallest enclosing) ball
  bool degenerate = false;
};

/// d-hypervolume of the simplex spanned by d+1 points in R^d,
/// |det([p_1-p_0, ..., p_d-p_0])| / d!.
double simplex_volume(const std::vector<Vec>& pts);

/// Longest edge length.
double simplex_diameter(const std::vector<Vec>& pts);

/// Scale-relative degeneracy test: volume < 1e-12 * diameter^d.
bool simplex_degenerate(const std::vector<Vec>& pts);

/// Outward normal of the facet opposite vertex r, scaled so its magnitude
/// equals the facet's (d-1)-volume, together with that volume. The vector is
/// orthogonal to every edge of the facet. Degenerate simplices yield a zero
/// vector and zero volume.
std::pair<Vec, double> facet_normal_and_volume(const std::vector<Vec>& pts,
                                               int r);

/// Distance from vertex s to the affine hull of its opposite facet,
/// computed as d * volume / facet_volume. Throws on degenerate input.
double elevation(const std::vector<Vec>& pts, int s);

/// Thickness of an analyzed simplex: min_s elevations[s] / (d * diameter).
/// Returns 0 for a degenerate simplex.
double thickness(const SimplexGeometry& geom);

/// Circumscribed ball through all d+1 vertices. Throws std::domain_error
/// when the simplex is degenerate (circumsphere unbounded).
Ball circumsphere(const std::vector<Vec>& pts);

/// Smallest ball enclosing the given points (any count >= 1). For small
/// inputs (n <= d+2) every boundary-support subset is enumerated; larger
/// sets use Welzl's randomized incremental algorithm.
Ball min_containment_ball(const std::vector<Vec>& pts);

/// Assemble the full geometry record for one simplex. Never throws on a
/// degenerate simplex; sets the flag and leaves ball fields zeroed instead.
SimplexGeometry analyze_simplex(const std::vector<Vec>& pts);

namespace detail {
/// Determinant of a square matrix by partially pivoted elimination carried
/// out in long double (the volume identities are determinant-based and
/// ill-conditioned for slivers).
long double det_long_double(const Mat& a);

/// Solve a small dense system in long double with partial pivoting.
/// Returns false when a pivot degenerates.
bool solve_long_double(const Mat& a, const Vec& b, Vec& x);
}  // namespace detail

}  // namespace meshcert
