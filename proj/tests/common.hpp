#pragma once

// Shared fixtures: the five-edge reference tree (two interior vertices, three
// observed leaves) and a pair of experiment data sets satisfying the
// determinant condition on every edge.

#include "telegraphnet/network.hpp"
#include "telegraphnet/problem.hpp"

namespace tgn::testing {

inline NetworkTopology reference_tree() {
  return build_network({{1, 0, 1, 1.0},
                        {2, 1, 2, 0.8},
                        {3, 1, 3, 1.2},
                        {4, 3, 4, 0.9},
                        {5, 3, 5, 1.1}},
                       0);
}

inline NetworkTopology single_edge(double length = 1.0) {
  return build_network({{1, 0, 1, length}}, 0);
}

/// Experiment 1: per-edge constant currents balanced at the interior
/// vertices, voltage x + 1. Experiment 2: per-edge linear currents (again
/// balanced), voltage 1. Boundary signals hold the t = 0 corner values.
inline ExperimentPair reference_experiments() {
  ExperimentPair ex;
  ex.first.initial_current = {constant_profile(1.0), constant_profile(0.5),
                              constant_profile(0.5), constant_profile(0.25),
                              constant_profile(0.25)};
  ex.first.initial_voltage.assign(5, polynomial_profile({1.0, 1.0}));
  ex.first.boundary_voltage[0] = [](double) { return 1.0; };
  ex.first.boundary_voltage[2] = [](double) { return 2.8; };
  ex.first.boundary_voltage[4] = [](double) { return 4.1; };
  ex.first.boundary_voltage[5] = [](double) { return 4.3; };

  ex.second.initial_current = {linear_profile(0.0, 2.0, 1.0, 1.0),
                               linear_profile(1.0, 0.5, 1.8, 0.2),
                               linear_profile(1.0, 0.5, 2.2, 1.0),
                               linear_profile(2.2, 0.5, 3.1, 0.8),
                               linear_profile(2.2, 0.5, 3.3, 0.8)};
  ex.second.initial_voltage.assign(5, constant_profile(1.0));
  for (int k : {0, 2, 4, 5}) ex.second.boundary_voltage[k] = [](double) { return 1.0; };
  return ex;
}

}  // namespace tgn::testing
