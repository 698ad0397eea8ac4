#pragma once

#include <Eigen/Dense>
#include <vector>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/problem.hpp"
#include "telegraphnet/trajectory.hpp"

namespace tgn {

enum class SolveDirection { Forward, Backward, Both };

/// Integrates the telegrapher system on the network: characteristic tracing
/// with quadratic interpolation for the lossless part, Strang splitting for
/// the zeroth-order terms, and an exact local linear solve at every vertex.
/// Forward covers [0, T]; backward runs the time-reversed system on [-T, 0].
FieldTrajectory solve(const NetworkTopology& topology, const CoefficientField& coefficients,
                      const ProblemData& data, const std::vector<EdgeGrid>& grids,
                      const TimeGrid& time, SolveDirection direction = SolveDirection::Both);

/// One incident edge's view of a vertex coupling problem.
struct VertexPort {
  double incoming = 0.0;   // characteristic value arriving at the vertex
  double impedance = 1.0;  // sqrt(L/C) at the vertex node
  bool at_terminal = true; // vertex is the edge's terminal node
};

struct VertexSolution {
  double voltage = 0.0;
  Eigen::ArrayXd currents;  // per port, in the edge's x-orientation
};

/// Solves the local vertex system: voltage continuity, current balance and
/// one outgoing-characteristic relation per edge. `reversed` flags a
/// negative time step (transport directions swap).
VertexSolution couple_vertex(const std::vector<VertexPort>& ports, bool reversed = false);

/// Applies L(p) to a sampled field with the centered second-order discrete
/// derivatives the diagnostics use (one-sided at domain boundaries):
/// f1 = p1 D_t u1 + D_x u2 + p3 u1,  f2 = D_x u1 + p2 D_t u2 + p4 u2.
struct OperatorResult {
  std::vector<Eigen::MatrixXd> f1, f2;
};
OperatorResult apply_operator(const CoefficientField& coefficients,
                              const FieldTrajectory& field);

}  // namespace tgn
