#include <meshcert/mesh_io.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace meshcert {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

json parse(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("malformed JSON in " + what);
  return j;
}

std::string real_or_null(double v) {
  if (!std::isfinite(v)) return "null";
  return format_real(v);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string mesh_to_json(const Mesh& mesh) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"format\": \"meshcert-mesh\",\n";
  out << "  \"format_version\": 1,\n";
  out << "  \"dim\": " << mesh.dim << ",\n";
  out << "  \"points\": [\n";
  for (size_t i = 0; i < mesh.points.size(); ++i) {
    out << "    [";
    for (int j = 0; j < mesh.dim; ++j) {
      if (j) out << ", ";
      out << format_real(mesh.points[i](j));
    }
    out << (i + 1 < mesh.points.size() ? "],\n" : "]\n");
  }
  out << "  ],\n";
  out << "  \"simplices\": [\n";
  for (size_t k = 0; k < mesh.simplices.size(); ++k) {
    out << "    [";
    for (size_t j = 0; j < mesh.simplices[k].size(); ++j) {
      if (j) out << ", ";
      out << mesh.simplices[k][j];
    }
    out << (k + 1 < mesh.simplices.size() ? "],\n" : "]\n");
  }
  out << "  ]\n";
  out << "}\n";
  return out.str();
}

void write_mesh(const std::string& path, const Mesh& mesh) {
  spill(path, mesh_to_json(mesh));
}

Mesh mesh_from_json(const std::string& text) {
  const json j = parse(text, "mesh document");
  if (!j.is_object()) throw std::runtime_error("mesh document must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw std::runtime_error("mesh document lacks an integer `dim` field");
  Mesh mesh;
  mesh.dim = j["dim"].get<int>();
  if (mesh.dim < 1) throw std::runtime_error("mesh `dim` must be >= 1");
  if (j.contains("format_version") && j["format_version"].get<int>() != 1)
    throw std::runtime_error("unsupported mesh format_version");

  if (!j.contains("points") || !j["points"].is_array())
    throw std::runtime_error("mesh document lacks a `points` array");
  for (size_t i = 0; i < j["points"].size(); ++i) {
    const auto& row = j["points"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != mesh.dim)
      throw std::runtime_error("point " + std::to_string(i) + " has " +
                               std::to_string(row.size()) + " coordinates, expected " +
                               std::to_string(mesh.dim));
    Vec p(mesh.dim);
    for (int c = 0; c < mesh.dim; ++c) {
      if (!row[static_cast<size_t>(c)].is_number())
        throw std::runtime_error("point " + std::to_string(i) + " has a non-numeric entry");
      p(c) = row[static_cast<size_t>(c)].get<double>();
    }
    mesh.points.push_back(p);
  }

  if (j.contains("simplices")) {
    if (!j["simplices"].is_array())
      throw std::runtime_error("mesh `simplices` must be an array");
    for (size_t k = 0; k < j["simplices"].size(); ++k) {
      const auto& row = j["simplices"][k];
      if (!row.is_array() || static_cast<int>(row.size()) != mesh.dim + 1)
        throw std::runtime_error("simplex " + std::to_string(k) + " has " +
                                 std::to_string(row.size()) + " vertices, expected " +
                                 std::to_string(mesh.dim + 1));
      SimplexVerts s;
      for (const auto& e : row) {
        if (!e.is_number_integer())
          throw std::runtime_error("simplex " + std::to_string(k) + " has a non-integer id");
        const int id = e.get<int>();
        if (id < 0 || id >= static_cast<int>(mesh.points.size()))
          throw std::runtime_error("simplex " + std::to_string(k) +
                                   " references missing point " + std::to_string(id));
        s.push_back(id);
      }
      mesh.simplices.push_back(std::move(s));
    }
  }
  return mesh;
}

Mesh read_mesh(const std::string& path) {
  Mesh mesh = mesh_from_json(slurp(path));
  if (mesh.simplices.empty())
    throw std::runtime_error("mesh file has no simplices: " + path);
  return mesh;
}

std::vector<Vec> read_points(const std::string& path) {
  return mesh_from_json(slurp(path)).points;
}

std::vector<Vec> read_barycentric_sidecar(const std::string& path, int dim) {
  const json j = parse(slurp(path), path);
  if (!j.is_object() || !j.contains("barycentric_points") ||
      !j["barycentric_points"].is_array())
    throw std::runtime_error("sidecar lacks a `barycentric_points` array: " + path);
  std::vector<Vec> out;
  for (size_t i = 0; i < j["barycentric_points"].size(); ++i) {
    const auto& row = j["barycentric_points"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim + 1)
      throw std::runtime_error("barycentric tuple " + std::to_string(i) + " has " +
                               std::to_string(row.size()) + " entries, expected " +
                               std::to_string(dim + 1));
    Vec b(dim + 1);
    for (int c = 0; c <= dim; ++c) b(c) = row[static_cast<size_t>(c)].get<double>();
    out.push_back(b);
  }
  return out;
}

void write_barycentric_sidecar(const std::string& path, const std::vector<Vec>& bary) {
  std::ostringstream out;
  out << "{\n  \"barycentric_points\": [\n";
  for (size_t i = 0; i < bary.size(); ++i) {
    out << "    [";
    for (Eigen::Index j = 0; j < bary[i].size(); ++j) {
      if (j) out << ", ";
      out << format_real(bary[i](j));
    }
    out << (i + 1 < bary.size() ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
  spill(path, out.str());
}

std::string report_to_json(const std::map<std::string, std::string>& header,
                           const VerificationReport& report) {
  std::ostringstream out;
  out << "{\n  \"config\": {\n";
  size_t i = 0;
  for (const auto& [key, value] : header) {
    out << "    \"" << key << "\": \"" << value << "\"";
    out << (++i < header.size() ? ",\n" : "\n");
  }
  out << "  },\n  \"all_pass\": " << (report.all_pass() ? "true" : "false")
      << ",\n  \"checks\": [\n";
  for (size_t c = 0; c < report.checks.size(); ++c) {
    const auto& ck = report.checks[c];
    out << "    {\"check_id\": \"" << ck.check_id << "\", \"anchor\": \"" << ck.anchor
        << "\", \"lhs\": " << real_or_null(ck.lhs) << ", \"rhs\": " << real_or_null(ck.rhs)
        << ", \"pass\": " << (ck.pass ? "true" : "false")
        << ", \"tightness\": " << real_or_null(ck.tightness) << "}";
    out << (c + 1 < report.checks.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

void write_report(const std::string& path,
                  const std::map<std::string, std::string>& header,
                  const VerificationReport& report) {
  spill(path, report_to_json(header, report));
}

std::string quality_report_to_json(const std::map<std::string, std::string>& header,
                                   const QualityReport& r) {
  std::ostringstream out;
  out << "{\n  \"config\": {\n";
  size_t i = 0;
  for (const auto& [key, value] : header) {
    out << "    \"" << key << "\": \"" << value << "\"";
    out << (++i < header.size() ? ",\n" : "\n");
  }
  out << "  },\n";
  out << "  \"dim\": " << r.dim << ",\n";
  out << "  \"degree\": " << r.degree << ",\n";
  out << "  \"n_points\": " << r.n_points << ",\n";
  out << "  \"n_simplices\": " << r.n_simplices << ",\n";
  out << "  \"c1\": " << real_or_null(r.c1) << ",\n";
  out << "  \"c2\": " << real_or_null(r.c2) << ",\n";
  out << "  \"c3\": " << real_or_null(r.c3.c3) << ",\n";
  out << "  \"c3_separation_branch\": " << (r.c3.separation_branch ? "true" : "false")
      << ",\n";
  out << "  \"c3_hessian_estimated\": " << (r.c3.hessian_estimated ? "true" : "false")
      << ",\n";
  out << "  \"c3_sup_estimated\": " << (r.c3.sup_estimated ? "true" : "false") << ",\n";
  out << "  \"theta\": " << real_or_null(r.theta) << ",\n";
  out << "  \"theta_hat\": " << real_or_null(r.theta_hat) << ",\n";
  out << "  \"lambda\": " << real_or_null(r.lambda) << ",\n";
  out << "  \"xi_min\": " << real_or_null(r.xi_min) << ",\n";
  out << "  \"delta\": " << real_or_null(r.delta) << ",\n";
  out << "  \"delaunay_valid\": " << (r.delaunay_valid ? "true" : "false") << ",\n";
  out << "  \"epsilon\": " << real_or_null(r.net.epsilon) << ",\n";
  out << "  \"epsilon_lower\": " << real_or_null(r.net.epsilon_lower) << ",\n";
  out << "  \"eta\": " << real_or_null(r.net.eta) << ",\n";
  out << "  \"eta_bar\": " << real_or_null(r.net.eta_bar) << ",\n";
  out << "  \"bound_chain\": {\n";
  i = 0;
  for (const auto& [key, value] : r.bound_chain) {
    out << "    \"" << key << "\": " << real_or_null(value);
    out << (++i < r.bound_chain.size() ? ",\n" : "\n");
  }
  out << "  }\n}\n";
  return out.str();
}

}  // namespace meshcert
