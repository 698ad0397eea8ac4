#pragma once

#include <string>
#include <vector>

#include "telegraphnet/inverse.hpp"

namespace tgn {

struct StabilityRow {
  double eps = 0.0;
  double lhs = 0.0;    // sum_j sum_n int |eps rho_{j,n}|^2 dx
  double rhs = 0.0;    // sum_{l,m} boundary data norm of the difference field
  double ratio = 0.0;
  std::string flags;   // "unreliable" when rhs sits at the quadrature noise floor
};

struct StabilityTable {
  std::vector<StabilityRow> rows;
  double max_ratio = 0.0;  // empirical Lipschitz constant over the eps grid
};

struct StabilityOptions {
  int threads = 1;
  /// rhs below 10x this floor flags the row as unreliable.
  double noise_floor = 1e-26;
};

/// For each eps: q = p + eps rho, both experiments solved under p and q on
/// [-T, T], difference traces measured at the observed leaves, and the
/// squared-norm ratio tabulated.
StabilityTable stability_experiment(const NetworkTopology& topology,
                                    const CoefficientProfiles& p_profiles,
                                    const CoefficientProfiles& rho_profile,
                                    const std::vector<double>& eps_values,
                                    const ExperimentPair& experiments, const GridSpec& grid,
                                    const StabilityOptions& options = {});

}  // namespace tgn
