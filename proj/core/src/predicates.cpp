#include <meshcert/predicates.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace meshcert::pred {

namespace {

using boost::multiprecision::cpp_int;

// Filtered long-double determinant: returns +1/-1 when the elimination
// result clears a conservative error threshold, 0 when the sign is not
// certain (caller must fall back to the exact path).
int filtered_det_sign(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<long double> m(static_cast<size_t>(n) * static_cast<size_t>(n));
  long double permanent_bound = 1.0L;
  for (int i = 0; i < n; ++i) {
    long double row_sum = 0.0L;
    for (int j = 0; j < n; ++j) {
      const long double v = static_cast<long double>(a(i, j));
      m[static_cast<size_t>(i * n + j)] = v;
      row_sum += std::abs(v);
    }
    permanent_bound *= row_sum;
  }

  long double det = 1.0L;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    long double best = std::abs(m[static_cast<size_t>(col * n + col)]);
    for (int r = col + 1; r < n; ++r) {
      const long double v = std::abs(m[static_cast<size_t>(r * n + col)]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0L) return 0;  // exactly singular column: defer to exact path
    if (pivot != col) {
      for (int j = 0; j < n; ++j)
        std::swap(m[static_cast<size_t>(pivot * n + j)], m[static_cast<size_t>(col * n + j)]);
      det = -det;
    }
    const long double p = m[static_cast<size_t>(col * n + col)];
    det *= p;
    for (int r = col + 1; r < n; ++r) {
      const long double f = m[static_cast<size_t>(r * n + col)] / p;
      for (int j = col; j < n; ++j)
        m[static_cast<size_t>(r * n + j)] -= f * m[static_cast<size_t>(col * n + j)];
    }
  }

  // Error budget: elimination roundoff in long double plus first-order
  // rounding of the double inputs, both against the permanent bound.
  const long double eps_ld = LDBL_EPSILON;
  const long double eps_d = DBL_EPSILON;
  const long double nn = static_cast<long double>(n);
  const long double theta =
      (16.0L * nn * nn * nn * std::pow(2.0L, nn) * eps_ld + 8.0L * nn * nn * eps_d) *
      permanent_bound;
  if (std::abs(det) <= theta) return 0;
  return det > 0.0L ? 1 : -1;
}

// Exact scaled-integer image of a set of doubles: x_i = out_i * 2^shift.
// Every finite double is a dyadic rational, so this is lossless.
void to_scaled_ints(const std::vector<double>& vals, std::vector<cpp_int>& out) {
  out.assign(vals.size(), 0);
  int min_exp = std::numeric_limits<int>::max();
  std::vector<std::pair<long long, int>> parts(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == 0.0) {
      parts[i] = {0, 0};
      continue;
    }
    int e = 0;
    const double mant = std::frexp(vals[i], &e);
    const auto m = static_cast<long long>(std::ldexp(mant, 53));
    parts[i] = {m, e - 53};
    min_exp = std::min(min_exp, e - 53);
  }
  if (min_exp == std::numeric_limits<int>::max()) min_exp = 0;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (parts[i].first == 0) continue;
    const int shift = parts[i].second - min_exp;
    if (shift > 4096)
      throw std::domain_error("coordinate magnitudes too disparate for exact predicate");
    out[i] = cpp_int(parts[i].first) << shift;
  }
}

// Fraction-free Bareiss elimination; exact sign of an integer determinant.
int bareiss_sign(std::vector<std::vector<cpp_int>>& m) {
  const int n = static_cast<int>(m.size());
  int sign = 1;
  cpp_int prev = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      std::swap(m[static_cast<size_t>(pivot)], m[static_cast<size_t>(col)]);
      sign = -sign;
    }
    for (int r = col + 1; r < n; ++r) {
      for (int j = col + 1; j < n; ++j) {
        cpp_int v = m[static_cast<size_t>(r)][static_cast<size_t>(j)] * m[static_cast<size_t>(col)][static_cast<size_t>(col)] -
                    m[static_cast<size_t>(r)][static_cast<size_t>(col)] * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
        m[static_cast<size_t>(r)][static_cast<size_t>(j)] = v / prev;  // exact division
      }
      m[static_cast<size_t>(r)][static_cast<size_t>(col)] = 0;
    }
    prev = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
  }
  const cpp_int& last = m[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
  if (last == 0) return 0;
  return (last > 0) ? sign : -sign;
}

int exact_orientation(const std::vector<Vec>& pts) {
  const int d = static_cast<int>(pts[0].size());
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>((d + 1) * d));
  for (const Vec& p : pts)
    for (int j = 0; j < d; ++j) flat.push_back(p(j));
  std::vector<cpp_int> ints;
  to_scaled_ints(flat, ints);

  std::vector<std::vector<cpp_int>> m(static_cast<size_t>(d),
                                      std::vector<cpp_int>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          ints[static_cast<size_t>((i + 1) * d + j)] - ints[static_cast<size_t>(j)];
  return bareiss_sign(m);
}

// Exact sign of det over rows (p_i - q | |p_i - q|^2), i = 0..d. The squared
// norms are formed in the integer domain so the whole matrix is exact.
int exact_lifted_det(const std::vector<Vec>& pts, const Vec& q) {
  const int d = static_cast<int>(pts[0].size());
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>((d + 2) * d));
  for (const Vec& p : pts)
    for (int j = 0; j < d; ++j) flat.push_back(p(j));
  for (int j = 0; j < d; ++j) flat.push_back(q(j));
  std::vector<cpp_int> ints;
  to_scaled_ints(flat, ints);

  const int n = d + 1;
  std::vector<std::vector<cpp_int>> m(static_cast<size_t>(n),
                                      std::vector<cpp_int>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    cpp_int norm2 = 0;
    for (int j = 0; j < d; ++j) {
      cpp_int diff = ints[static_cast<size_t>(i * d + j)] - ints[static_cast<size_t>((d + 1) * d + j)];
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = diff;
      norm2 += diff * diff;
    }
    m[static_cast<size_t>(i)][static_cast<size_t>(d)] = norm2;
  }
  return bareiss_sign(m);
}

}  // namespace

int sign_of_determinant(const Mat& a) {
  const int s = filtered_det_sign(a);
  if (s != 0) return s;
  const int n = static_cast<int>(a.rows());
  // Exact path: scale each row independently (positive scalings keep the
  // sign), then Bareiss.
  std::vector<std::vector<cpp_int>> m(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) row[static_cast<size_t>(j)] = a(i, j);
    std::vector<cpp_int> ints;
    to_scaled_ints(row, ints);
    m[static_cast<size_t>(i)] = std::move(ints);
  }
  return bareiss_sign(m);
}

int orientation(const std::vector<Vec>& pts) {
  const int d = static_cast<int>(pts[0].size());
  if (static_cast<int>(pts.size()) != d + 1)
    throw std::invalid_argument("orientation needs d+1 points");
  Mat a(d, d);
  for (int i = 0; i < d; ++i) a.row(i) = (pts[static_cast<size_t>(i) + 1] - pts[0]).transpose();
  const int s = filtered_det_sign(a);
  if (s != 0) return s;
  return exact_orientation(pts);
}

int affine_rank(const std::vector<Vec>& pts) {
  if (pts.empty()) return -1;
  const int d = static_cast<int>(pts[0].size());
  const int m = static_cast<int>(pts.size()) - 1;
  if (m == 0) return 0;
  std::vector<double> flat;
  flat.reserve(pts.size() * static_cast<size_t>(d));
  for (const Vec& p : pts)
    for (int j = 0; j < d; ++j) flat.push_back(p(j));
  std::vector<cpp_int> ints;
  to_scaled_ints(flat, ints);

  // Edge matrix rows, exact integer Gaussian elimination with full pivoting.
  std::vector<std::vector<cpp_int>> e(static_cast<size_t>(m),
                                      std::vector<cpp_int>(static_cast<size_t>(d)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j)
      e[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          ints[static_cast<size_t>((i + 1) * d + j)] - ints[static_cast<size_t>(j)];

  int rank = 0;
  int row = 0;
  for (int col = 0; col < d && row < m; ++col) {
    int pivot = -1;
    for (int r = row; r < m; ++r)
      if (e[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(e[static_cast<size_t>(pivot)], e[static_cast<size_t>(row)]);
    for (int r = row + 1; r < m; ++r) {
      if (e[static_cast<size_t>(r)][static_cast<size_t>(col)] == 0) continue;
      const cpp_int a = e[static_cast<size_t>(r)][static_cast<size_t>(col)];
      const cpp_int b = e[static_cast<size_t>(row)][static_cast<size_t>(col)];
      for (int j = col; j < d; ++j)
        e[static_cast<size_t>(r)][static_cast<size_t>(j)] =
            e[static_cast<size_t>(r)][static_cast<size_t>(j)] * b -
            e[static_cast<size_t>(row)][static_cast<size_t>(j)] * a;
    }
    ++row;
    ++rank;
  }
  return rank;
}

int insphere(const std::vector<Vec>& pts, const Vec& q) {
  const int d = static_cast<int>(pts[0].size());
  if (static_cast<int>(pts.size()) != d + 1)
    throw std::invalid_argument("insphere needs d+1 simplex points");
  const int orient = orientation(pts);
  if (orient == 0) throw std::domain_error("insphere of a degenerate simplex");

  const int n = d + 1;
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec diff = pts[static_cast<size_t>(i)] - q;
    for (int j = 0; j < d; ++j) a(i, j) = diff(j);
    a(i, d) = diff.squaredNorm();
  }
  int det_sign = filtered_det_sign(a);
  if (det_sign == 0) det_sign = exact_lifted_det(pts, q);

  const int parity = (d % 2 == 0) ? 1 : -1;
  return orient * det_sign * parity;
}

}  // namespace meshcert::pred
