#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <vector>

#include "telegraphnet/grid.hpp"
#include "telegraphnet/network.hpp"

namespace tgn {

/// A scalar profile of one variable together with its derivative.
/// All spatial profiles are functions of the global tree coordinate x.
struct Profile {
  std::function<double(double)> f;
  std::function<double(double)> df;

  double operator()(double x) const { return f(x); }
  bool valid() const { return static_cast<bool>(f); }
};

Profile constant_profile(double value);
Profile polynomial_profile(std::vector<double> coeffs);  // c0 + c1 x + ...
Profile sine_profile(double amplitude, double omega, double phase);
Profile gaussian_profile(double amplitude, double center, double width);
/// Linear interpolation of samples; derivative is the piecewise slope.
Profile sampled_profile(Eigen::ArrayXd x, Eigen::ArrayXd values);
/// Linear blend between two endpoint values over [x0, x1].
Profile linear_profile(double x0, double v0, double x1, double v1);
Profile scale_profile(const Profile& p, double factor);
Profile add_profiles(const Profile& a, const Profile& b);

/// Initial data, exterior-vertex voltage signals and optional sources for
/// one run of the governing system.
struct ProblemData {
  std::vector<Profile> initial_current;  // z_{j,1}, indexed like topology.edges
  std::vector<Profile> initial_voltage;  // z_{j,2}
  std::map<int, std::function<double(double)>> boundary_voltage;  // by boundary vertex id
  // Optional inhomogeneous source, indexed by edge position: f(x, t).
  std::vector<std::function<double(double, double)>> source_current;
  std::vector<std::function<double(double, double)>> source_voltage;

  double boundary(int vertex, double t) const {
    auto it = boundary_voltage.find(vertex);
    return it == boundary_voltage.end() ? 0.0 : it->second(t);
  }
  bool has_source() const { return !source_current.empty() || !source_voltage.empty(); }
};

/// Two independent data sets driving the inverse machinery (m = 1, 2).
struct ExperimentPair {
  ProblemData first;
  ProblemData second;

  const ProblemData& get(int m) const { return m == 0 ? first : second; }
};

/// Largest violation of the t=0 corner compatibility z_{j,2}(x(V_k)) = phi_k(0)
/// over boundary vertices. Reported as a warning by the solver, not an error.
double corner_mismatch(const NetworkTopology& topology, const ProblemData& data);

/// Largest violation of initial-data vertex conditions: voltage continuity
/// and current balance at interior vertices.
double initial_vertex_mismatch(const NetworkTopology& topology, const ProblemData& data);

}  // namespace tgn
