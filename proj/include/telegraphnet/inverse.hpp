#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/problem.hpp"
#include "telegraphnet/solver.hpp"
#include "telegraphnet/trajectory.hpp"

namespace tgn {

/// Determinant test on the two initial data sets. The 4x4 system matrix
/// factors into two 2x2 blocks; min |det| is taken over grid nodes.
struct Assumption2Result {
  bool pass = false;
  double min_abs_det = 0.0;
  double threshold = 0.0;
  int edge_id = 0;
  double x = 0.0;  // location of the minimum
};

/// Core single-interval check, usable on any x grid with explicit profiles
/// (z1 = (current, voltage) of the first experiment, z2 of the second).
Assumption2Result assumption2_on_interval(const Eigen::ArrayXd& x, const Profile& z1_current,
                                          const Profile& z1_voltage, const Profile& z2_current,
                                          const Profile& z2_voltage,
                                          double threshold_factor = 1e-8);

/// Network-wide check over every edge grid.
Assumption2Result check_assumption2(const NetworkTopology& topology,
                                    const std::vector<EdgeGrid>& grids,
                                    const ExperimentPair& experiments,
                                    double threshold_factor = 1e-8);

/// w = u - v and the induced source f = (rho1 dt v1 + rho3 v1; rho2 dt v2 +
/// rho4 v2) from the perturbation and the discrete time derivatives of v.
struct DifferenceField {
  FieldTrajectory w;
  std::vector<Eigen::MatrixXd> f1, f2;
  /// max norm of L(p) w - f over the valid interior region (consistency check).
  double residual = 0.0;
};

DifferenceField difference_field(const FieldTrajectory& u, const FieldTrajectory& v,
                                 const CoefficientField& p, const CoefficientField& q,
                                 bool check_residual = false);

/// Per-edge node-sampled perturbation profiles rho_{j,1..4}.
using SampledPerturbation = std::vector<std::array<Eigen::ArrayXd, 4>>;

/// dt w(x, 0) for both experiments, per edge: [m][component] arrays.
struct TimeDerivativeData {
  std::vector<std::array<std::array<Eigen::ArrayXd, 2>, 2>> edges;  // [e][m][comp]
};

/// The algebraic t=0 relations as a forward map: given rho, produces
/// dt w_m(x, 0) exactly (no PDE solve). Used as the reconstruction oracle.
TimeDerivativeData algebraic_forward_map(const NetworkTopology& topology,
                                         const std::vector<EdgeGrid>& grids,
                                         const ExperimentPair& experiments,
                                         const CoefficientField& p, const CoefficientField& q,
                                         const SampledPerturbation& rho);

/// Extracts dt w(x, 0) from simulated difference trajectories with the
/// 4th-order 5-level centered stencil straddling t = 0.
TimeDerivativeData time_derivative_from_simulation(const FieldTrajectory& w1,
                                                   const FieldTrajectory& w2);

struct DirectReconstruction {
  SampledPerturbation rho;
  int flagged_points = 0;  // near-singular local systems, interpolated over
};

/// Solves the pointwise 4x4 linear system assembled from the t=0 relations
/// of both experiments for rho at every grid node.
DirectReconstruction direct_reconstruct_t0(const NetworkTopology& topology,
                                           const std::vector<EdgeGrid>& grids,
                                           const TimeDerivativeData& data,
                                           const ExperimentPair& experiments,
                                           const CoefficientField& q,
                                           const CoefficientField& p,
                                           double condition_limit = 1e8);

/// Relative L2 error sum over edges/components against a reference.
double perturbation_relative_error(const std::vector<EdgeGrid>& grids,
                                   const SampledPerturbation& recovered,
                                   const SampledPerturbation& truth);

SampledPerturbation sample_perturbation(const std::vector<EdgeGrid>& grids,
                                        const CoefficientProfiles& rho, double eps = 1.0);

}  // namespace tgn
