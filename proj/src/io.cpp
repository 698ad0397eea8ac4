#include "telegraphnet/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

#include "telegraphnet/errors.hpp"

namespace tgn::io {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return doc;
}

NetworkTopology network_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("edges")) {
    throw ConfigError("network document needs an \"edges\" array");
  }
  std::vector<EdgeDescriptor> edges;
  for (const json& e : doc.at("edges")) {
    EdgeDescriptor d;
    d.id = e.at("id").get<int>();
    d.tail = e.at("tail").get<int>();
    d.head = e.at("head").get<int>();
    d.length = e.at("length").get<double>();
    edges.push_back(d);
  }
  NetworkTopology topology = build_network(edges, doc.value("root", 0));
  validate_topology(topology);
  return topology;
}

json network_to_json(const NetworkTopology& topology) {
  json doc;
  doc["root"] = topology.root;
  doc["edges"] = json::array();
  for (const Edge& e : topology.edges) {
    doc["edges"].push_back(
        {{"id", e.id}, {"tail", e.init_vertex}, {"head", e.term_vertex}, {"length", e.length}});
  }
  return doc;
}

Profile profile_from_json(const json& doc) {
  if (doc.is_number()) return constant_profile(doc.get<double>());
  if (!doc.is_object() || !doc.contains("type")) {
    throw ConfigError("profile must be a number or an object with a \"type\"");
  }
  const std::string type = doc.at("type").get<std::string>();
  if (type == "constant") return constant_profile(doc.at("value").get<double>());
  if (type == "polynomial") return polynomial_profile(doc.at("coeffs").get<std::vector<double>>());
  if (type == "sine") {
    return sine_profile(doc.value("amplitude", 1.0), doc.at("omega").get<double>(),
                        doc.value("phase", 0.0));
  }
  if (type == "gaussian") {
    return gaussian_profile(doc.value("amplitude", 1.0), doc.at("center").get<double>(),
                            doc.at("width").get<double>());
  }
  if (type == "linear") {
    return linear_profile(doc.at("x0").get<double>(), doc.at("v0").get<double>(),
                          doc.at("x1").get<double>(), doc.at("v1").get<double>());
  }
  if (type == "samples") {
    const auto xs = doc.at("x").get<std::vector<double>>();
    const auto vs = doc.at("values").get<std::vector<double>>();
    return sampled_profile(Eigen::Map<const Eigen::ArrayXd>(xs.data(),
                                                            static_cast<Eigen::Index>(xs.size())),
                           Eigen::Map<const Eigen::ArrayXd>(vs.data(),
                                                            static_cast<Eigen::Index>(vs.size())));
  }
  throw ConfigError("unknown profile type \"" + type + "\"");
}

namespace {

std::array<Profile, 4> quad_from_json(const json& doc) {
  if (!doc.is_array() || doc.size() != 4) {
    throw ConfigError("coefficient entry must list four profiles [L, C, R, G]");
  }
  std::array<Profile, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = profile_from_json(doc[i]);
  return out;
}

/// Spatial per-edge field: a single profile for all edges or
/// {"per_edge": {"<edge id>": profile}} with a required entry per edge.
std::vector<Profile> spatial_from_json(const NetworkTopology& topology, const json& doc,
                                       const std::string& what) {
  std::vector<Profile> out(topology.edges.size());
  if (doc.is_object() && doc.contains("per_edge")) {
    for (std::size_t e = 0; e < out.size(); ++e) {
      const std::string key = std::to_string(topology.edges[e].id);
      if (!doc.at("per_edge").contains(key)) {
        throw ConfigError(what + ": missing edge " + key);
      }
      out[e] = profile_from_json(doc.at("per_edge").at(key));
    }
    return out;
  }
  const Profile common = profile_from_json(doc);
  for (Profile& p : out) p = common;
  return out;
}

}  // namespace

CoefficientProfiles coefficients_from_json(const NetworkTopology& topology, const json& doc) {
  CoefficientProfiles out;
  out.edges.resize(topology.edges.size());
  if (doc.contains("constant")) {
    const auto v = doc.at("constant").get<std::vector<double>>();
    if (v.size() != 4) throw ConfigError("\"constant\" coefficients need four values");
    for (auto& edge : out.edges) {
      for (std::size_t i = 0; i < 4; ++i) edge[i] = constant_profile(v[i]);
    }
  } else if (doc.contains("per_edge")) {
    for (std::size_t e = 0; e < out.edges.size(); ++e) {
      const std::string key = std::to_string(topology.edges[e].id);
      if (!doc.at("per_edge").contains(key)) {
        throw ConfigError("coefficients: missing edge " + key);
      }
      out.edges[e] = quad_from_json(doc.at("per_edge").at(key));
    }
  } else {
    throw ConfigError("coefficients need \"constant\" or \"per_edge\"");
  }
  if (doc.contains("bounds")) {
    const json& b = doc.at("bounds");
    out.bounds.lower1 = b.value("lower_inductance", out.bounds.lower1);
    out.bounds.lower2 = b.value("lower_capacitance", out.bounds.lower2);
    if (b.contains("upper")) {
      const auto u = b.at("upper").get<std::vector<double>>();
      if (u.size() != 4) throw ConfigError("\"upper\" bounds need four values");
      for (int i = 0; i < 4; ++i) out.bounds.upper[i] = u[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

GridSpec grid_from_json(const json& doc) {
  GridSpec spec;
  spec.cells = doc.value("cells", spec.cells);
  spec.cfl = doc.value("cfl", spec.cfl);
  spec.T = doc.value("T", spec.T);
  spec.dt = doc.value("dt", spec.dt);
  if (doc.contains("cells_per_edge")) {
    for (const auto& [key, value] : doc.at("cells_per_edge").items()) {
      spec.cells_per_edge[std::stoi(key)] = value.get<int>();
    }
  }
  return spec;
}

ProblemData problem_from_json(const NetworkTopology& topology, const json& doc) {
  ProblemData data;
  const json& init = doc.at("initial");
  data.initial_current = spatial_from_json(topology, init.at("current"), "initial current");
  data.initial_voltage = spatial_from_json(topology, init.at("voltage"), "initial voltage");
  if (doc.contains("boundary")) {
    for (const auto& [key, value] : doc.at("boundary").items()) {
      const int vertex = std::stoi(key);
      if (!topology.boundary_vertices.count(vertex)) {
        throw ConfigError("boundary signal at non-boundary vertex " + key);
      }
      const Profile p = profile_from_json(value);
      data.boundary_voltage[vertex] = p.f;
    }
  }
  return data;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const NetworkTopology& topology,
                          const FieldTrajectory& traj, int time_stride) {
  std::ofstream out = open_csv(path);
  out << "edge,x,t,u1,u2\n";
  for (std::size_t e = 0; e < traj.grids.size(); ++e) {
    const int id = topology.edges[e].id;
    for (int level = traj.first_level; level <= traj.last_level; level += time_stride) {
      const double t = traj.time.times[level];
      for (Eigen::Index i = 0; i < traj.grids[e].x.size(); ++i) {
        out << id << ',' << format_double(traj.grids[e].x[i]) << ',' << format_double(t) << ','
            << format_double(traj.u1[e](i, level)) << ',' << format_double(traj.u2[e](i, level))
            << '\n';
      }
    }
  }
}

void write_energy_csv(const std::string& path, const Eigen::MatrixX2d& history) {
  std::ofstream out = open_csv(path);
  out << "t,energy\n";
  for (Eigen::Index i = 0; i < history.rows(); ++i) {
    out << format_double(history(i, 0)) << ',' << format_double(history(i, 1)) << '\n';
  }
}

void write_carleman_csv(const std::string& path, const CarlemanReport& report) {
  std::ofstream out = open_csv(path);
  out << "s,lhs_log,rhs_source_log,btilde_log,ratio\n";
  for (const CarlemanRow& row : report.rows) {
    out << format_double(row.s) << ',' << format_double(row.lhs_log()) << ','
        << format_double(row.rhs_log()) << ',' << format_double(row.btilde_log()) << ','
        << format_double(row.ratio) << '\n';
  }
}

void write_stability_csv(const std::string& path, const StabilityTable& table) {
  std::ofstream out = open_csv(path);
  out << "epsilon,lhs,rhs,ratio,flags\n";
  for (const StabilityRow& row : table.rows) {
    out << format_double(row.eps) << ',' << format_double(row.lhs) << ','
        << format_double(row.rhs) << ',' << format_double(row.ratio) << ',' << row.flags << '\n';
  }
}

void write_series_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_csv(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? ',' : '\n');
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << format_double(row[i]) << (i + 1 < row.size() ? ',' : '\n');
    }
  }
}

}  // namespace tgn::io
