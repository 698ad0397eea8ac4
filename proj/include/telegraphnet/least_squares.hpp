#pragma once

#include <Eigen/Dense>
#include <array>
#include <random>
#include <vector>

#include "telegraphnet/inverse.hpp"

namespace tgn {

struct LsqOptions {
  double lambda = 0.0;       // Tikhonov weight on the per-edge constants
  int max_iterations = 20;
  double misfit_tol = 1e-18;  // absolute; the zero-residual fixed point stops at once
  double step_tol = 1e-12;
  double fd_step = 1e-6;     // forward-difference step for the Jacobian
  int threads = 1;
};

struct LsqResult {
  /// Per-edge constants, packed [edge][component], 4N entries.
  Eigen::VectorXd rho;
  std::vector<double> misfit_history;  // misfit_history[0] is the initial misfit
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Gauss-Newton reconstruction of per-edge constant perturbations from the
/// measured difference-trace derivatives (l = 1, 2) at the observed leaves.
LsqResult least_squares_reconstruct(const NetworkTopology& topology,
                                    const CoefficientProfiles& p_profiles,
                                    const ExperimentPair& experiments,
                                    const std::array<MeasurementSet, 2>& measured,
                                    const GridSpec& grid, const LsqOptions& options = {});

/// Measured-data helper: difference-field traces under a known true
/// perturbation (per-edge constants, packed like LsqResult::rho).
std::array<MeasurementSet, 2> synthesize_measurements(const NetworkTopology& topology,
                                                      const CoefficientProfiles& p_profiles,
                                                      const Eigen::VectorXd& rho_true,
                                                      const ExperimentPair& experiments,
                                                      const GridSpec& grid);

/// Adds i.i.d. Gaussian noise to the raw traces and recomputes derivative
/// traces and norms.
void add_trace_noise(MeasurementSet& set, double sigma, std::mt19937_64& rng);

/// Expands packed per-edge constants into coefficient profiles.
CoefficientProfiles perturbation_profiles(const NetworkTopology& topology,
                                          const Eigen::VectorXd& rho_packed);

}  // namespace tgn
