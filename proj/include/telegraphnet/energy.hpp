#pragma once

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/trajectory.hpp"

namespace tgn {

/// E(t) = sum_j int (p1 u1^2 + p2 u2^2) dx by the trapezoidal rule.
double energy(const FieldTrajectory& traj, const CoefficientField& coefficients, double t);

/// E(t) at every stored level (first column t, second column E).
Eigen::MatrixX2d energy_history(const FieldTrajectory& traj,
                                const CoefficientField& coefficients);

/// Empirical analogue of the uniform bound on time derivatives up to order 3:
/// max over t of sum_j sum_{k=0..3} int |d_t^k u1|^2 + |d_t^k u2|^2 dx.
struct EnergyBoundReport {
  double bound = 0.0;   // the max
  double argmax_t = 0.0;
  Eigen::ArrayXd per_time;  // the summed quantity at each admissible level
  Eigen::ArrayXd times;
};

EnergyBoundReport energy_bound_report(const FieldTrajectory& traj,
                                      const CoefficientField& coefficients);

}  // namespace tgn
