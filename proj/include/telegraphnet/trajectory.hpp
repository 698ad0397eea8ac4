#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/grid.hpp"
#include "telegraphnet/network.hpp"

namespace tgn {

/// Space-time samples of (current, voltage) per edge on [-T, T].
/// u1[e], u2[e] are (nodes x time levels); columns outside
/// [first_level, last_level] are zero-filled and not meaningful.
struct FieldTrajectory {
  std::vector<EdgeGrid> grids;
  TimeGrid time;
  std::vector<Eigen::MatrixXd> u1;
  std::vector<Eigen::MatrixXd> u2;
  int first_level = 0;
  int last_level = 0;
  std::vector<std::string> warnings;

  int level_of_t0() const { return time.index0(); }
  /// Closest stored level for a time value; throws if outside the grid.
  int level_at(double t) const;
};

struct KirchhoffResiduals {
  double max_current_imbalance = 0.0;
  double max_voltage_jump = 0.0;
};

/// Max over interior vertices and stored levels of the two vertex-condition
/// residuals.
KirchhoffResiduals kirchhoff_residuals(const NetworkTopology& topology,
                                       const FieldTrajectory& traj);

/// Current trace of one observed leaf terminal and its discrete time
/// derivatives (orders 1 and 2, centered interior / one-sided ends).
struct LeafTrace {
  int vertex = 0;
  int edge_id = 0;
  Eigen::ArrayXd u1;
  Eigen::ArrayXd d1;
  Eigen::ArrayXd d2;
};

struct MeasurementSet {
  std::vector<LeafTrace> traces;
  Eigen::ArrayXd times;
  double dt = 0.0;
  /// sum over traces and l=1,2 of int |d_l|^2 dt (Theorem-style data norm).
  double data_norm = 0.0;
  /// The l=0 norm, reported as a diagnostic only.
  double l0_norm = 0.0;
};

/// Extracts the current at x(T_j) for every edge terminating at a non-root
/// boundary vertex, with discrete time derivatives.
MeasurementSet boundary_trace(const FieldTrajectory& traj, const NetworkTopology& topology);

Eigen::ArrayXd derivative_in_time(const Eigen::ArrayXd& f, double dt, int order);

}  // namespace tgn
