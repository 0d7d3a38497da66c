#include <meshcert/fields.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace meshcert {

namespace {

struct Spec {
  std::string name;
  std::map<std::string, std::string> params;
};

Spec parse_spec(const std::string& text) {
  Spec s;
  const auto colon = text.find(':');
  s.name = text.substr(0, colon);
  if (colon == std::string::npos) return s;
  std::stringstream rest(text.substr(colon + 1));
  std::string kv;
  while (std::getline(rest, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed field spec parameter: " + kv);
    s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return s;
}

double param_double(const Spec& s, const std::string& key, double fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : std::stod(it->second);
}

int param_int(const Spec& s, const std::string& key, int fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : std::stoi(it->second);
}

Vec param_vec(const Spec& s, const std::string& key, const Vec& fallback) {
  const auto it = s.params.find(key);
  if (it == s.params.end()) return fallback;
  std::vector<double> vals;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ';')) vals.push_back(std::stod(tok));
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

std::vector<std::vector<int>> exponents_up_to(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(static_cast<size_t>(d), 0);
  int total = 0;
  while (true) {
    out.push_back(alpha);
    int m = 0;
    while (m < d) {
      if (total < k) {
        ++alpha[static_cast<size_t>(m)];
        ++total;
        break;
      }
      total -= alpha[static_cast<size_t>(m)];
      alpha[static_cast<size_t>(m)] = 0;
      ++m;
    }
    if (m == d) break;
  }
  return out;
}

double eval_poly(const std::vector<std::vector<int>>& exps, const Vec& coeffs,
                 const Vec& x) {
  double acc = 0.0;
  for (size_t a = 0; a < exps.size(); ++a) {
    double term = coeffs(static_cast<Eigen::Index>(a));
    for (size_t j = 0; j < exps[a].size(); ++j)
      for (int rep = 0; rep < exps[a][j]; ++rep) term *= x(static_cast<Eigen::Index>(j));
    acc += term;
  }
  return acc;
}

Vec eval_poly_gradient(const std::vector<std::vector<int>>& exps, const Vec& coeffs,
                       const Vec& x) {
  const int d = static_cast<int>(x.size());
  Vec g = Vec::Zero(d);
  for (size_t a = 0; a < exps.size(); ++a) {
    for (int i = 0; i < d; ++i) {
      const int e = exps[a][static_cast<size_t>(i)];
      if (e == 0) continue;
      double term = coeffs(static_cast<Eigen::Index>(a)) * e;
      for (int j = 0; j < d; ++j) {
        const int ee = exps[a][static_cast<size_t>(j)] - (j == i ? 1 : 0);
        for (int rep = 0; rep < ee; ++rep) term *= x(j);
      }
      g(i) += term;
    }
  }
  return g;
}

Vec random_coeffs(size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec c(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) c(static_cast<Eigen::Index>(i)) = u(rng);
  return c;
}

ScalarField make_trig_scalar(int dim, double freq) {
  ScalarField f;
  f.name = "trig";
  f.value = [dim, freq](const Vec& x) {
    double v = 1.0;
    for (int m = 0; m < dim; ++m) v *= std::sin(freq * x(m) + 0.4 + 0.3 * m);
    return v;
  };
  f.gradient = [dim, freq](const Vec& x) {
    Vec g(dim);
    for (int i = 0; i < dim; ++i) {
      double v = freq * std::cos(freq * x(i) + 0.4 + 0.3 * i);
      for (int m = 0; m < dim; ++m)
        if (m != i) v *= std::sin(freq * x(m) + 0.4 + 0.3 * m);
      g(i) = v;
    }
    return g;
  };
  return f;
}

}  // namespace

ScalarField scalar_field(const std::string& spec_text, int dim, std::uint64_t seed) {
  const Spec spec = parse_spec(spec_text);
  if (spec.name == "trig") return make_trig_scalar(dim, param_double(spec, "freq", 1.0));
  if (spec.name == "poly")
    return random_polynomial_scalar(dim, param_int(spec, "deg", 2), seed);
  if (spec.name == "quadratic") {
    ScalarField f;
    f.name = "quadratic";
    f.value = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
    f.gradient = [](const Vec& x) { return x; };
    return f;
  }
  if (spec.name == "constant") {
    const double c = param_double(spec, "c", 0.0);
    ScalarField f;
    f.name = "constant";
    f.value = [c](const Vec&) { return c; };
    f.gradient = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
    return f;
  }
  if (spec.name == "coord") {
    ScalarField f;
    f.name = "coord";
    f.value = [](const Vec& x) { return x(0); };
    f.gradient = [](const Vec& x) {
      Vec g = Vec::Zero(x.size());
      g(0) = 1.0;
      return g;
    };
    return f;
  }
  if (spec.name == "radial") {
    ScalarField f;
    f.name = "radial";
    f.value = [](const Vec& x) {
      return std::exp(-(x.array() - 0.5).matrix().squaredNorm());
    };
    f.gradient = [](const Vec& x) {
      const Vec shifted = (x.array() - 0.5).matrix();
      return Vec(-2.0 * std::exp(-shifted.squaredNorm()) * shifted);
    };
    return f;
  }
  throw std::invalid_argument("unknown scalar field spec: " + spec_text);
}

VectorField vector_field(const std::string& spec_text, int dim, std::uint64_t seed) {
  if (spec_text.rfind("grad:", 0) == 0) {
    const ScalarField s = scalar_field(spec_text.substr(5), dim, seed);
    VectorField f;
    f.name = "grad-" + s.name;
    f.value = s.gradient;
    return f;
  }
  const Spec spec = parse_spec(spec_text);
  if (spec.name == "const") {
    Vec def = Vec::Zero(dim);
    def(0) = 1.0;
    const Vec c = param_vec(spec, "c", def);
    if (c.size() != dim)
      throw std::invalid_argument("const vector field has wrong dimension");
    VectorField f;
    f.name = "const";
    f.value = [c](const Vec&) { return c; };
    f.sup_hint = [c](const std::vector<Vec>&) { return c.norm(); };
    return f;
  }
  if (spec.name == "trig") return random_trig_vector(dim, seed);
  if (spec.name == "poly")
    return random_polynomial_vector(dim, param_int(spec, "deg", 2), seed);
  throw std::invalid_argument("unknown vector field spec: " + spec_text);
}

SizingField sizing_field(const std::string& spec_text, int dim) {
  const Spec spec = parse_spec(spec_text);
  if (spec.name == "constant") return sizing_constant(param_double(spec, "h0", 1.0));
  if (spec.name == "affine") {
    const double c0 = param_double(spec, "c0", 2.0);
    Vec def = Vec::Zero(dim);
    def(0) = 0.5;
    const Vec g = param_vec(spec, "g", def);
    if (g.size() != dim)
      throw std::invalid_argument("affine sizing gradient has wrong dimension");
    return sizing_affine(c0, g);
  }
  if (spec.name == "radial") {
    const double c0 = param_double(spec, "c0", 1.0);
    const double c1 = param_double(spec, "c1", 1.0);
    return sizing_radial_quadratic(c0, c1, Vec::Constant(dim, 0.5));
  }
  throw std::invalid_argument("unknown sizing field spec: " + spec_text);
}

ScalarField random_polynomial_scalar(int dim, int degree, std::uint64_t seed) {
  const auto exps = exponents_up_to(dim, degree);
  const Vec coeffs = random_coeffs(exps.size(), seed);
  ScalarField f;
  f.name = "poly-deg" + std::to_string(degree);
  f.value = [exps, coeffs](const Vec& x) { return eval_poly(exps, coeffs, x); };
  f.gradient = [exps, coeffs](const Vec& x) {
    return eval_poly_gradient(exps, coeffs, x);
  };
  return f;
}

VectorField random_polynomial_vector(int dim, int degree, std::uint64_t seed) {
  const auto exps = exponents_up_to(dim, degree);
  std::vector<Vec> coeffs;
  for (int c = 0; c < dim; ++c)
    coeffs.push_back(random_coeffs(exps.size(), seed + 1000003ULL * static_cast<std::uint64_t>(c)));
  VectorField f;
  f.name = "poly-vec-deg" + std::to_string(degree);
  f.value = [exps, coeffs, dim](const Vec& x) {
    Vec v(dim);
    for (int c = 0; c < dim; ++c) v(c) = eval_poly(exps, coeffs[static_cast<size_t>(c)], x);
    return v;
  };
  return f;
}

VectorField random_trig_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 3.14);
  std::vector<double> freq(static_cast<size_t>(dim)), ph(static_cast<size_t>(dim));
  for (int m = 0; m < dim; ++m) {
    freq[static_cast<size_t>(m)] = u(rng);
    ph[static_cast<size_t>(m)] = phase(rng);
  }
  VectorField f;
  f.name = "trig-vec";
  f.value = [dim, freq, ph](const Vec& x) {
    Vec v(dim);
    for (int m = 0; m < dim; ++m) {
      const double arg = freq[static_cast<size_t>(m)] * x((m + 1) % dim) + ph[static_cast<size_t>(m)];
      v(m) = (m % 2 == 0) ? std::sin(arg) : std::cos(arg);
    }
    return v;
  };
  return f;
}

}  // namespace meshcert
