#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "telegraphnet/network.hpp"

namespace tgn {

/// Requested discretization: cells per edge (uniform default with per-edge
/// overrides), time horizon and CFL number. An explicit dt overrides the
/// CFL-derived one but is still validated against it.
struct GridSpec {
  int cells = 200;
  std::map<int, int> cells_per_edge;  // by edge id, overrides `cells`
  double cfl = 0.9;
  double T = 1.0;
  double dt = 0.0;  // 0 = derive from CFL

  int cells_for(int edge_id) const {
    auto it = cells_per_edge.find(edge_id);
    return it == cells_per_edge.end() ? cells : it->second;
  }
};

/// Node grid of one edge: n cells, n+1 nodes including both vertex endpoints.
struct EdgeGrid {
  int n = 0;
  double dx = 0.0;
  Eigen::ArrayXd x;  // n+1 global coordinates
};

std::vector<EdgeGrid> make_edge_grids(const NetworkTopology& topology, const GridSpec& spec);

/// Uniform time levels t_m = m*dt for m = -steps..steps with t=0 and t=+-T
/// on the grid.
struct TimeGrid {
  double dt = 0.0;
  int steps = 0;  // per side
  double T = 0.0;
  Eigen::ArrayXd times;  // 2*steps+1 values, times[steps] == 0

  int size() const { return 2 * steps + 1; }
  int index0() const { return steps; }
};

class CoefficientField;  // coefficients.hpp

/// Derives dt from the CFL bound dt <= cfl * min_j min_i dx_j*sqrt(p1*p2),
/// then rounds down so T is an integer number of steps. Throws ConfigError
/// if an explicit spec.dt violates the bound or cfl > 1.
TimeGrid make_time_grid(const GridSpec& spec, const std::vector<EdgeGrid>& grids,
                        const CoefficientField& coefficients);

}  // namespace tgn
