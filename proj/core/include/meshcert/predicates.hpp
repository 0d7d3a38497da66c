#pragma once

#include <meshcert/types.hpp>

#include <vector>

namespace meshcert::pred {

/// Sign of det([p_1-p_0, ..., p_d-p_0]) for d+1 points in R^d.
/// Evaluated with a filtered floating determinant first; when the filter
/// cannot certify the sign, falls back to exact integer arithmetic on the
/// scaled dyadic representations of the coordinates.
int orientation(const std::vector<Vec>& pts);

/// Position of q relative to the circumsphere of the d+1 simplex points:
/// +1 strictly inside, 0 on the sphere, -1 strictly outside. Independent of
/// the simplex orientation. Throws std::domain_error when the simplex is
/// degenerate.
int insphere(const std::vector<Vec>& pts, const Vec& q);

/// Exact sign (-1, 0, +1) of the determinant of a matrix of doubles.
int sign_of_determinant(const Mat& a);

/// Exact affine rank of a point set (dimension of its affine hull).
int affine_rank(const std::vector<Vec>& pts);

}  // namespace meshcert::pred
