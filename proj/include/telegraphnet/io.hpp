#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/estimate.hpp"
#include "telegraphnet/network.hpp"
#include "telegraphnet/problem.hpp"
#include "telegraphnet/stability.hpp"
#include "telegraphnet/trajectory.hpp"

namespace tgn::io {

nlohmann::json load_json_file(const std::string& path);

/// Network description document: {"root": id, "edges": [{id, tail, head, length}]}.
NetworkTopology network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const NetworkTopology& topology);

/// Profile document: a bare number (constant) or a tagged object
/// ({"type": "constant"|"polynomial"|"sine"|"gaussian"|"linear"|"samples", ...}).
Profile profile_from_json(const nlohmann::json& doc);

/// Coefficient document: {"constant": [L, C, R, G]} or
/// {"per_edge": {"<edge id>": [four profiles]}}, optional {"bounds": {...}}.
CoefficientProfiles coefficients_from_json(const NetworkTopology& topology,
                                           const nlohmann::json& doc);

GridSpec grid_from_json(const nlohmann::json& doc);

/// Problem data document: {"initial": {"current": ..., "voltage": ...},
/// "boundary": {"<vertex id>": profile-of-t}}. Spatial entries accept a
/// single profile for every edge or {"per_edge": {...}}.
ProblemData problem_from_json(const NetworkTopology& topology, const nlohmann::json& doc);

// Deterministic CSV output ("%.17g" formatting throughout).
void write_trajectory_csv(const std::string& path, const NetworkTopology& topology,
                          const FieldTrajectory& traj, int time_stride = 1);
void write_energy_csv(const std::string& path, const Eigen::MatrixX2d& history);
void write_carleman_csv(const std::string& path, const CarlemanReport& report);
void write_stability_csv(const std::string& path, const StabilityTable& table);
void write_series_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

}  // namespace tgn::io
