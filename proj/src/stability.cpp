#include "telegraphnet/stability.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"
#include "telegraphnet/util.hpp"

namespace tgn {

StabilityTable stability_experiment(const NetworkTopology& topology,
                                    const CoefficientProfiles& p_profiles,
                                    const CoefficientProfiles& rho_profile,
                                    const std::vector<double>& eps_values,
                                    const ExperimentPair& experiments, const GridSpec& grid,
                                    const StabilityOptions& options) {
  const auto grids = make_edge_grids(topology, grid);
  const CoefficientField p = sample_coefficients(topology, grids, p_profiles);
  const TimeGrid time = make_time_grid(grid, grids, p);

  const Assumption2Result a2 = check_assumption2(topology, grids, experiments);
  if (!a2.pass) {
    throw DomainError("initial data fail the determinant assumption: min |det| = " +
                      std::to_string(a2.min_abs_det) + " at edge " +
                      std::to_string(a2.edge_id));
  }

  // Unperturbed solves do not depend on eps.
  std::array<FieldTrajectory, 2> base;
  for (int m = 0; m < 2; ++m) {
    base[static_cast<std::size_t>(m)] =
        solve(topology, p, experiments.get(m), grids, time, SolveDirection::Both);
  }

  auto trapz_sq = [](const Eigen::ArrayXd& f, double dx) {
    const Eigen::ArrayXd g = f.square();
    return (g.sum() - 0.5 * (g[0] + g[g.size() - 1])) * dx;
  };
  const SampledPerturbation rho_unit = sample_perturbation(grids, rho_profile, 1.0);

  StabilityTable table;
  table.rows.resize(eps_values.size());

  parallel_for(static_cast<int>(eps_values.size()), options.threads, [&](int idx) {
    const double eps = eps_values[static_cast<std::size_t>(idx)];
    StabilityRow row;
    row.eps = eps;

    if (eps == 0.0) {
      row.flags = "undefined";
      table.rows[static_cast<std::size_t>(idx)] = row;
      return;
    }

    const CoefficientField q = perturb_coefficients(topology, grids, p, rho_profile, eps);
    for (std::size_t e = 0; e < grids.size(); ++e) {
      for (int c = 0; c < 4; ++c) {
        row.lhs += eps * eps * trapz_sq(rho_unit[e][static_cast<std::size_t>(c)], grids[e].dx);
      }
    }
    for (int m = 0; m < 2; ++m) {
      const FieldTrajectory v =
          solve(topology, q, experiments.get(m), grids, time, SolveDirection::Both);
      const DifferenceField diff = difference_field(base[static_cast<std::size_t>(m)], v, p, q);
      const MeasurementSet set = boundary_trace(diff.w, topology);
      row.rhs += set.data_norm;
    }
    if (row.rhs > 0.0) row.ratio = row.lhs / row.rhs;
    if (row.rhs < 10.0 * options.noise_floor) row.flags = "unreliable";
    table.rows[static_cast<std::size_t>(idx)] = row;
  });

  for (const StabilityRow& row : table.rows) {
    if (row.flags.empty()) table.max_ratio = std::max(table.max_ratio, row.ratio);
  }
  return table;
}

}  // namespace tgn
