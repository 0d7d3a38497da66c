// meshcert command line: mesh generation, ingestion, quality reporting,
// inequality verification, and interpolation convergence studies.
#include <meshcert/fields.hpp>
#include <meshcert/functionals.hpp>
#include <meshcert/mesh.hpp>
#include <meshcert/mesh_io.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>

namespace {

using namespace meshcert;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

std::string resolve_out(const std::string& cli_out, const std::string& fallback) {
  if (!cli_out.empty()) return cli_out;
  const char* dir = std::getenv("MESHCERT_OUT_DIR");
  if (dir && *dir) return (std::filesystem::path(dir) / fallback).string();
  return fallback;
}

struct CommonArgs {
  std::string mesh_path;
  std::string out;
  std::string field = "trig";
  std::string sizing = "constant";
  std::string points_sidecar;  // user interpolation nodes, barycentric
  int dim = 2;
  int degree = 2;
  int levels = 4;
  std::uint64_t seed = 1;
  int threads = 1;
};

std::shared_ptr<InterpolationScheme> make_scheme(const CommonArgs& a, int dim) {
  if (a.points_sidecar.empty())
    return std::make_shared<InterpolationScheme>(build_scheme(dim, a.degree));
  const auto bary = read_barycentric_sidecar(a.points_sidecar, dim);
  return std::make_shared<InterpolationScheme>(build_scheme(dim, a.degree, bary));
}

std::map<std::string, std::string> config_header(const std::string& command,
                                                 const CommonArgs& a) {
  std::map<std::string, std::string> h;
  h["command"] = command;
  if (!a.mesh_path.empty()) h["mesh"] = a.mesh_path;
  h["dim"] = std::to_string(a.dim);
  h["degree"] = std::to_string(a.degree);
  h["field"] = a.field;
  h["sizing"] = a.sizing;
  h["seed"] = std::to_string(a.seed);
  h["threads"] = std::to_string(a.threads);
  h["quadrature_degree"] = std::to_string(2 * a.degree + 2);
  h["sup_safety_factor"] = "1.05";
  return h;
}

std::vector<Vec> random_net_points(int dim, int count, double eta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> pts;
  int attempts = 0;
  const int max_attempts = 200000 + 2000 * count;
  while (static_cast<int>(pts.size()) < count && attempts < max_attempts) {
    ++attempts;
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p(j) = u(rng);
    bool ok = true;
    for (const Vec& q : pts)
      if ((p - q).norm() < eta) {
        ok = false;
        break;
      }
    if (ok) pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) < count)
    throw std::runtime_error("could not place " + std::to_string(count) +
                             " points at separation " + std::to_string(eta));
  return pts;
}

int cmd_gen_coxeter(const CommonArgs& a, int layers, double scale) {
  const Mesh mesh = coxeter_a_tilde(a.dim, layers, scale);
  const std::string path = resolve_out(a.out, "coxeter.json");
  write_mesh(path, mesh);
  std::cout << "wrote " << path << " (" << mesh.points.size() << " points, "
            << mesh.simplices.size() << " simplices)\n";
  return 0;
}

int cmd_gen_random_net(const CommonArgs& a, int count, double eta) {
  if (eta <= 0.0) eta = 0.3 / std::pow(static_cast<double>(count), 1.0 / a.dim);
  const auto pts = random_net_points(a.dim, count, eta, a.seed);
  Mesh mesh = delaunay(pts);
  const std::string path = resolve_out(a.out, "random-net.json");
  write_mesh(path, mesh);
  std::cout << "wrote " << path << " (" << mesh.points.size() << " points, "
            << mesh.simplices.size() << " simplices, eta >= " << format_real(eta)
            << ")\n";
  return 0;
}

int cmd_delaunay(const CommonArgs& a) {
  const auto pts = read_points(a.mesh_path);
  const Mesh mesh = delaunay(pts);
  const std::string path = resolve_out(a.out, "delaunay.json");
  write_mesh(path, mesh);
  std::cout << "wrote " << path << " (" << mesh.simplices.size() << " simplices)\n";
  return 0;
}

int cmd_report(const CommonArgs& a) {
  const Mesh mesh = read_mesh(a.mesh_path);
  const ScalarField v = scalar_field(a.field, mesh.dim, a.seed);
  const SizingField sizing = sizing_field(a.sizing, mesh.dim);
  const auto quad = simplex_quadrature(mesh.dim, 2 * a.degree + 2);
  SupNormOptions sup_opts;
  sup_opts.seed = a.seed;
  SurrogateOptions surr;
  const QualityReport r =
      quality_report(mesh, v, sizing, a.degree, quad, sup_opts, surr);
  CommonArgs echo = a;
  echo.dim = mesh.dim;
  const std::string path = resolve_out(a.out, "report.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << quality_report_to_json(config_header("report", echo), r);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_verify(const CommonArgs& a, double inject_c1_scale) {
  const Mesh mesh = read_mesh(a.mesh_path);
  const int d = mesh.dim;
  const ScalarField v = scalar_field(a.field, d, a.seed);
  const VectorField f = random_trig_vector(d, a.seed + 17);
  const SizingField sizing = sizing_field(a.sizing, d);
  const auto quad = simplex_quadrature(d, 2 * a.degree + 2);
  const auto net = measure_net(mesh.points, 1e-6, a.seed, 20000);

  FunctionalOptions fopts;
  fopts.threads = a.threads;
  SupNormOptions sup_opts;
  sup_opts.seed = a.seed;

  VerificationReport report;
  {
    std::vector<ElementVectorFn> fields;
    fields.push_back(ambient_field(v.gradient));
    fields.push_back(ambient_field(f.value));
    auto eq = verify_equivalence(mesh, fields, quad, 1e-9, fopts);
    if (inject_c1_scale != 1.0) {
      // Test hook: emulate a corrupted C1 in the lower-bound checks.
      for (auto& c : eq.checks)
        if (c.check_id.rfind("equivalence-lower", 0) == 0) {
          c.lhs *= inject_c1_scale;
          c.pass = c.lhs <= c.rhs * (1.0 + 1e-9);
          c.tightness = (c.lhs > 0.0) ? c.rhs / c.lhs : 1.0;
        }
    }
    report.checks.insert(report.checks.end(), eq.checks.begin(), eq.checks.end());
  }
  {
    const auto ub = verify_upper_bound(mesh, ambient_field(v.gradient), sizing, net,
                                       quad, sup_opts, fopts);
    report.checks.insert(report.checks.end(), ub.checks.begin(), ub.checks.end());
  }
  {
    ErrorEstimateInputs inputs;
    auto scheme = make_scheme(a, d);
    lebesgue_constant(*scheme);
    inputs.scheme = scheme;
    inputs.sizing = sizing;
    inputs.net = net;
    inputs.quad = quad;
    inputs.functional = fopts;
    const auto grad = verify_error_estimates(mesh, v, inputs);
    report.checks.insert(report.checks.end(), grad.checks.begin(), grad.checks.end());
    const auto vec = verify_error_estimates_vector(mesh, f, inputs);
    report.checks.insert(report.checks.end(), vec.checks.begin(), vec.checks.end());
  }

  CommonArgs echo = a;
  echo.dim = d;
  const std::string path = resolve_out(a.out, "verify.json");
  write_report(path, config_header("verify", echo), report);
  std::cout << "wrote " << path << "\n";
  if (!report.all_pass()) {
    for (const auto& c : report.checks)
      if (!c.pass)
        std::cerr << "verification failed: " << c.check_id << " (" << c.anchor
                  << "), lhs=" << format_real(c.lhs) << " rhs=" << format_real(c.rhs)
                  << "\n";
    return kExitVerifyFailed;
  }
  return 0;
}

int cmd_interp_study(const CommonArgs& a) {
  if (a.dim < 2 || a.dim > 6)
    throw std::runtime_error("interp-study supports dimensions 2..6");
  FunctionalOptions fopts;
  fopts.threads = a.threads;
  const auto quad = simplex_quadrature(a.dim, 2 * a.degree + 2);
  const SizingField sizing = sizing_field(a.sizing, a.dim);
  const ScalarField v = scalar_field(a.field, a.dim, a.seed);

  auto scheme = make_scheme(a, a.dim);
  lebesgue_constant(*scheme);

  std::vector<std::array<double, 9>> rows;
  for (int level = 1; level <= a.levels; ++level) {
    const Mesh mesh = coxeter_a_tilde(a.dim, level, 1.0 / level);
    const auto net = measure_net(mesh.points, 1e-6, a.seed, 20000);
    const auto c3 = constant_c3(mesh, sizing, net);
    const double c1 = constant_c1(mesh);
    const auto [theta, theta_hat] = rajan_theta(mesh);

    const FieldInterpolant fi = interpolate_gradient(mesh, scheme, v);
    const ElementVectorFn err = [&](int elem, const Vec& x) -> Vec {
      return v.gradient(x) - fi.eval(elem, x);
    };
    double h = 0.0;
    for (size_t k = 0; k < mesh.simplices.size(); ++k)
      h = std::max(h, simplex_diameter(mesh.simplex_points(static_cast<int>(k))));
    const double l2_err = gradient_norm(mesh, err, quad, fopts);
    const double psi_err = roughness_functional(mesh, err, quad, fopts);
    SupNormOptions sup_opts;
    sup_opts.lattice_order = 10;
    sup_opts.mc_samples = 500;
    sup_opts.seed = a.seed;
    const double sup_err = sup_norm_estimate(mesh, err, sup_opts);
    SurrogateOptions surr;
    const auto surrogate = best_approx_surrogate(mesh, scheme, v.gradient, a.dim, surr);
    const double bound =
        (1.0 + scheme->lebesgue) * c3.c3 * std::sqrt(theta) / c1 *
        surrogate.certified_sup_error;
    rows.push_back({h, l2_err, sup_err, psi_err, bound, scheme->lebesgue, theta, c1,
                    c3.c3});
  }

  const std::string path = resolve_out(a.out, "interp-study.csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "h,l2_error,sup_error,psi_error,bound_rhs,lambda,theta,c1,c3\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << format_real(row[c]);
    }
    out << "\n";
  }
  if (rows.size() >= 2) {
    // Regression slopes of log error against log h, one per error column.
    auto slope_of = [&](int col) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const int n = static_cast<int>(rows.size());
      for (const auto& row : rows) {
        const double x = std::log(row[0]);
        const double y = std::log(std::max(row[static_cast<size_t>(col)], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    out << "slope," << format_real(slope_of(1)) << "," << format_real(slope_of(2))
        << "," << format_real(slope_of(3)) << ",,,,,\n";
  } else {
    std::cerr << "warning: a single refinement level gives no slope\n";
  }
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simplicial mesh quality and interpolation-error certification"};
  app.require_subcommand(1);
  // Flags override config-file values, which override defaults.
  app.set_config("--config")->configurable(false);

  CommonArgs args;
  int layers = 2;
  double scale = 1.0;
  int count = 50;
  double eta = 0.0;
  double inject_c1_scale = 1.0;

  auto add_common = [&](CLI::App* cmd, bool needs_mesh) {
    if (needs_mesh)
      cmd->add_option("--mesh", args.mesh_path, "input mesh file")->required();
    cmd->add_option("--out", args.out, "output path (default under MESHCERT_OUT_DIR)");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--threads", args.threads, "worker threads (deterministic reductions)");
  };

  CLI::App* gen_cox = app.add_subcommand("gen-coxeter", "generate a Coxeter A~_d patch");
  gen_cox->add_option("--dim", args.dim, "dimension (2..6)")->required();
  gen_cox->add_option("--layers", layers, "patch extent");
  gen_cox->add_option("--scale", scale, "edge scale factor");
  add_common(gen_cox, false);

  CLI::App* gen_net = app.add_subcommand("gen-random-net", "random separated points + Delaunay");
  gen_net->add_option("--dim", args.dim, "dimension")->required();
  gen_net->add_option("--count", count, "number of points");
  gen_net->add_option("--eta", eta, "minimum separation (default 0.3 n^{-1/d})");
  add_common(gen_net, false);

  CLI::App* del = app.add_subcommand("delaunay", "triangulate a point file");
  add_common(del, true);

  CLI::App* rep = app.add_subcommand("report", "quality report for a mesh file");
  rep->add_option("--degree", args.degree, "interpolation degree for Lambda and bounds");
  rep->add_option("--field", args.field, "scalar test field spec");
  rep->add_option("--sizing", args.sizing, "sizing field spec");
  add_common(rep, true);

  CLI::App* ver = app.add_subcommand("verify", "run the inequality checks");
  ver->add_option("--degree", args.degree, "interpolation degree");
  ver->add_option("--field", args.field, "scalar test field spec");
  ver->add_option("--sizing", args.sizing, "sizing field spec");
  ver->add_option("--points", args.points_sidecar,
                  "sidecar with user interpolation nodes (barycentric tuples)");
  ver->add_option("--inject-c1-scale", inject_c1_scale, "test hook")->group("");
  add_common(ver, true);

  CLI::App* study = app.add_subcommand("interp-study", "convergence study CSV");
  study->add_option("--dim", args.dim, "dimension (2..6)")->required();
  study->add_option("--degree", args.degree, "interpolation degree");
  study->add_option("--levels", args.levels, "refinement levels");
  study->add_option("--field", args.field, "scalar test field spec");
  study->add_option("--sizing", args.sizing, "sizing field spec");
  study->add_option("--points", args.points_sidecar,
                    "sidecar with user interpolation nodes (barycentric tuples)");
  add_common(study, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cox->parsed()) return cmd_gen_coxeter(args, layers, scale);
    if (gen_net->parsed()) return cmd_gen_random_net(args, count, eta);
    if (del->parsed()) return cmd_delaunay(args);
    if (rep->parsed()) return cmd_report(args);
    if (ver->parsed()) return cmd_verify(args, inject_c1_scale);
    if (study->parsed()) return cmd_interp_study(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
