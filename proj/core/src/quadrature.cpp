#include <meshcert/quadrature.hpp>

#include <meshcert/geometry.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace meshcert {

namespace {

constexpr int kDegreeCap = 30;

long double factorial_ld(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= static_cast<long double>(i);
  return f;
}

// n-point Gauss-Jacobi rule on [0,1] for the weight (1-t)^alpha, via
// Golub-Welsch on the monic Jacobi(alpha, 0) recurrence.
void gauss_jacobi01(int n, int alpha, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  const double a = static_cast<double>(alpha);
  Mat jac = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double diag;
    if (k == 0)
      diag = -a / (a + 2.0);
    else
      diag = -(a * a) / ((2.0 * k + a) * (2.0 * k + a + 2.0));
    jac(k, k) = diag;
    if (k >= 1) {
      const double num = 4.0 * k * k * (k + a) * (k + a);
      const double den = (2.0 * k + a) * (2.0 * k + a) * (2.0 * k + a + 1.0) *
                         (2.0 * k + a - 1.0);
      const double off = std::sqrt(num / den);
      jac(k, k - 1) = off;
      jac(k - 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(jac);
  const Vec x = es.eigenvalues();
  const Mat v = es.eigenvectors();
  // Total mass of (1-t)^alpha on [0,1].
  const double mu0 = 1.0 / (a + 1.0);
  nodes.resize(static_cast<size_t>(n));
  weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<size_t>(i)] = 0.5 * (x(i) + 1.0);
    weights[static_cast<size_t>(i)] = mu0 * v(0, i) * v(0, i);
  }
}

QuadratureRule conical_product(int d, int degree) {
  const int n = (degree + 2) / 2;  // exact through 2n-1 >= degree
  std::vector<std::vector<double>> tn(static_cast<size_t>(d)), tw(static_cast<size_t>(d));
  for (int axis = 0; axis < d; ++axis)
    gauss_jacobi01(n, d - 1 - axis, tn[static_cast<size_t>(axis)], tw[static_cast<size_t>(axis)]);

  QuadratureRule rule;
  rule.dim = d;
  rule.exact_degree = 2 * n - 1;
  const long double dfact = factorial_ld(d);

  std::vector<int> idx(static_cast<size_t>(d), 0);
  while (true) {
    Vec x(d);
    long double w = dfact;  // normalizes the weight sum from 1/d! to 1
    double rem = 1.0;
    for (int axis = 0; axis < d; ++axis) {
      const double t = tn[static_cast<size_t>(axis)][static_cast<size_t>(idx[static_cast<size_t>(axis)])];
      w *= static_cast<long double>(tw[static_cast<size_t>(axis)][static_cast<size_t>(idx[static_cast<size_t>(axis)])]);
      x(axis) = t * rem;
      rem *= (1.0 - t);
    }
    Vec bary(d + 1);
    bary(0) = 1.0 - x.sum();
    for (int i = 0; i < d; ++i) bary(i + 1) = x(i);
    rule.nodes.push_back(bary);
    rule.weights.push_back(static_cast<double>(w));

    int axis = 0;
    while (axis < d) {
      if (++idx[static_cast<size_t>(axis)] < n) break;
      idx[static_cast<size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == d) break;
  }
  return rule;
}

QuadratureRule grundmann_moeller(int d, int degree) {
  const int s = std::max(0, (degree) / 2);  // exact through 2s+1 >= degree
  const int dd = 2 * s + 1;
  QuadratureRule rule;
  rule.dim = d;
  rule.exact_degree = dd;
  const long double dfact = factorial_ld(d);

  for (int i = 0; i <= s; ++i) {
    const long double base = static_cast<long double>(dd + d - 2 * i);
    long double w = std::pow(2.0L, static_cast<long double>(-2 * s)) *
                    std::pow(base, static_cast<long double>(dd)) /
                    (factorial_ld(i) * factorial_ld(dd + d - i));
    if (i % 2) w = -w;
    w *= dfact;

    // All beta in N^d with |beta| <= s - i, odometer order.
    std::vector<int> beta(static_cast<size_t>(d), 0);
    const int cap = s - i;
    int total = 0;
    while (true) {
      Vec bary(d + 1);
      double sum = 0.0;
      for (int m = 0; m < d; ++m) {
        bary(m + 1) = static_cast<double>(2 * beta[static_cast<size_t>(m)] + 1) /
                      static_cast<double>(dd + d - 2 * i);
        sum += bary(m + 1);
      }
      bary(0) = 1.0 - sum;
      rule.nodes.push_back(bary);
      rule.weights.push_back(static_cast<double>(w));

      int m = 0;
      while (m < d) {
        if (total < cap) {
          ++beta[static_cast<size_t>(m)];
          ++total;
          break;
        }
        total -= beta[static_cast<size_t>(m)];
        beta[static_cast<size_t>(m)] = 0;
        ++m;
      }
      if (m == d) break;
    }
  }
  return rule;
}

}  // namespace

QuadratureRule simplex_quadrature(int d, int degree, QuadratureFamily family) {
  if (d < 1) throw std::invalid_argument("quadrature dimension must be >= 1");
  if (degree < 0) throw std::invalid_argument("quadrature degree must be >= 0");
  if (degree > kDegreeCap)
    throw std::invalid_argument("quadrature degree above supported cap (30)");
  switch (family) {
    case QuadratureFamily::ConicalProduct:
      return conical_product(d, degree);
    case QuadratureFamily::GrundmannMoeller:
      return grundmann_moeller(d, degree);
  }
  throw std::logic_error("unknown quadrature family");
}

Vec barycentric_to_point(const std::vector<Vec>& verts, const Vec& bary) {
  Vec x = Vec::Zero(verts[0].size());
  for (size_t i = 0; i < verts.size(); ++i) x += bary(static_cast<Eigen::Index>(i)) * verts[i];
  return x;
}

double integrate_simplex(const QuadratureRule& rule, const std::vector<Vec>& verts,
                         const std::function<double(const Vec&)>& f) {
  const double vol = simplex_volume(verts);
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(barycentric_to_point(verts, rule.nodes[i]));
  return vol * acc;
}

double reference_monomial_integral(const std::vector<int>& alpha) {
  int total = 0;
  long double num = 1.0L;
  for (int a : alpha) {
    total += a;
    num *= factorial_ld(a);
  }
  const int d = static_cast<int>(alpha.size());
  return static_cast<double>(num / factorial_ld(total + d));
}

}  // namespace meshcert
