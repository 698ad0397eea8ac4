#pragma once

#include <functional>
#include <vector>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/problem.hpp"
#include "telegraphnet/trajectory.hpp"

namespace tgn {

/// A closed-form field on one edge with first partial derivatives.
struct AnalyticEdgeField {
  std::function<double(double, double)> u1, u2;      // (x, t)
  std::function<double(double, double)> u1_x, u1_t;
  std::function<double(double, double)> u2_x, u2_t;
};

struct AnalyticField {
  std::vector<AnalyticEdgeField> edges;  // indexed like topology.edges
  double T = 0.0;
};

/// Builds a smooth field satisfying every homogeneous condition of the
/// source-driven system: zero at t = +-T (temporal bump factor), zero voltage
/// at exterior vertices, voltage continuity and exact current balance at
/// interior vertices. Voltage comes from a continuous piecewise-polynomial
/// potential on the tree; current from a conserved edge-flow assignment
/// (leaf terminal flows zero, interior terminal flows the sum of the child
/// flows) shaped by in-edge bumps.
AnalyticField manufacture_homogeneous_field(const NetworkTopology& topology, double T);

/// f = L(p)u evaluated in closed form from the analytic derivatives.
struct AnalyticSource {
  std::vector<std::function<double(double, double)>> f1, f2;
};
AnalyticSource analytic_operator(const AnalyticField& field,
                                 const CoefficientProfiles& coefficients);

/// Samples the analytic field on solver grids over the full [-T, T] range.
FieldTrajectory sample_field(const AnalyticField& field, const std::vector<EdgeGrid>& grids,
                             const TimeGrid& time);

/// Samples a closed-form source on the same grids (one matrix per edge,
/// nodes x time levels).
struct SampledSource {
  std::vector<Eigen::MatrixXd> f1, f2;
};
SampledSource sample_source(const AnalyticSource& source, const std::vector<EdgeGrid>& grids,
                            const TimeGrid& time);

}  // namespace tgn
