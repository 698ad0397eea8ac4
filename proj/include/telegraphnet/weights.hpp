#pragma once

#include <Eigen/Dense>
#include <vector>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/grid.hpp"
#include "telegraphnet/network.hpp"

namespace tgn {

/// Per-edge quadratic-in-space, concave-in-time weight
/// phi_j(x, t) = alpha_j (x - xstar_j)^2 - beta t^2.
struct WeightFamily {
  struct EdgeWeight {
    double alpha = 1.0;
    double xstar = 0.0;
  };
  std::vector<EdgeWeight> edges;  // indexed like topology.edges
  double beta = 0.0;
  double T = 1.0;

  double phi(int e, double x, double t) const {
    const auto& w = edges[static_cast<std::size_t>(e)];
    return w.alpha * (x - w.xstar) * (x - w.xstar) - beta * t * t;
  }
  double phi_x(int e, double x) const {
    const auto& w = edges[static_cast<std::size_t>(e)];
    return 2.0 * w.alpha * (x - w.xstar);
  }
  double phi_t(double t) const { return -2.0 * beta * t; }

  /// Max of phi over the closed network cylinder (attained at some
  /// terminal node at t = 0).
  double max_phi(const NetworkTopology& topology) const;
};

/// Propagates (alpha, xstar) from the root edge outward so that both vertex
/// compatibility equations hold exactly: at an interior vertex with incoming
/// edge i and d outgoing edges, xstar_j = ((d-1) x(V_k) + xstar_i)/d and
/// alpha_j = d^2 alpha_i.
WeightFamily build_weights(const NetworkTopology& topology, double root_alpha,
                           double root_xstar, double beta, double T);

/// Direct post-hoc verification of the two compatibility equations at every
/// interior vertex; returns the largest relative mismatch of each.
struct WeightCompatibility {
  double max_value_mismatch = 0.0;
  double max_slope_mismatch = 0.0;
};
WeightCompatibility check_weight_compatibility(const NetworkTopology& topology,
                                               const WeightFamily& weights);

/// Sign-definiteness of D(x,t) = p1 p2 |phi_t|^2 - |phi_x|^2 over the grid.
struct Assumption1Result {
  bool pass = false;
  double min_abs = 0.0;
  int edge_id = 0;
  double x = 0.0, t = 0.0;  // location of the minimum of |D|
  /// Per-edge analytic sufficient condition sqrt(p1 p2) beta T < alpha (x_I - xstar).
  std::vector<bool> sufficient_condition;
};
Assumption1Result check_assumption1(const NetworkTopology& topology, const WeightFamily& weights,
                                    const CoefficientField& coefficients,
                                    const std::vector<EdgeGrid>& grids, const TimeGrid& time);

/// Two-level weight geometry used by the stability argument: there must be
/// d1 with min_x phi(x, 0) >= d1 > max_x phi(x, +-T).
struct WeightGap {
  bool ok = false;
  double d1 = 0.0;            // min over edges and x of phi(x, 0)
  double boundary_max = 0.0;  // max over edges and x of phi(x, +-T)
};
WeightGap check_weight_gap(const NetworkTopology& topology, const WeightFamily& weights);

}  // namespace tgn
