#pragma once

#include <meshcert/functionals.hpp>
#include <meshcert/mesh.hpp>

#include <map>
#include <string>
#include <vector>

namespace meshcert {

/// Serialize a double with 17 significant digits (lossless round trip).
std::string format_real(double v);

/// Mesh text document, format_version 1: {"format": "meshcert-mesh",
/// "format_version": 1, "dim": d, "points": [[...d reals...]...],
/// "simplices": [[...d+1 ints...]...]}. Reals carry 17 significant digits;
/// lines end with LF.
std::string mesh_to_json(const Mesh& mesh);
void write_mesh(const std::string& path, const Mesh& mesh);

/// Parse a mesh document. Rejects dimension mismatches, bad indices, and
/// malformed structure with messages naming the offending entry.
Mesh mesh_from_json(const std::string& text);
Mesh read_mesh(const std::string& path);

/// Points-only variant: accepts a full mesh document or one without the
/// `simplices` field.
std::vector<Vec> read_points(const std::string& path);

/// Sidecar with user interpolation nodes: {"barycentric_points": [[...d+1
/// reals...]...]}.
std::vector<Vec> read_barycentric_sidecar(const std::string& path, int dim);
void write_barycentric_sidecar(const std::string& path, const std::vector<Vec>& bary);

/// Machine-readable verification report: header echoes the effective
/// configuration, then one record per check with {check_id, anchor, lhs,
/// rhs, pass, tightness}.
std::string report_to_json(const std::map<std::string, std::string>& header,
                           const VerificationReport& report);
void write_report(const std::string& path,
                  const std::map<std::string, std::string>& header,
                  const VerificationReport& report);

std::string quality_report_to_json(const std::map<std::string, std::string>& header,
                                   const QualityReport& report);

}  // namespace meshcert
