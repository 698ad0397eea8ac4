#include "telegraphnet/grid.hpp"

#include <cmath>

#include "telegraphnet/coefficients.hpp"
#include "telegraphnet/errors.hpp"

namespace tgn {

std::vector<EdgeGrid> make_edge_grids(const NetworkTopology& topology, const GridSpec& spec) {
  std::vector<EdgeGrid> grids;
  grids.reserve(topology.edges.size());
  for (const Edge& e : topology.edges) {
    const int n = spec.cells_for(e.id);
    if (n < 4) {
      throw ConfigError("edge " + std::to_string(e.id) + " needs at least 4 cells, got " +
                        std::to_string(n));
    }
    EdgeGrid g;
    g.n = n;
    g.dx = e.length / n;
    g.x = Eigen::ArrayXd::LinSpaced(n + 1, e.x_init, e.x_term);
    grids.push_back(std::move(g));
  }
  return grids;
}

TimeGrid make_time_grid(const GridSpec& spec, const std::vector<EdgeGrid>& grids,
                        const CoefficientField& coefficients) {
  if (spec.cfl <= 0.0 || spec.cfl > 1.0) {
    throw ConfigError("CFL number must lie in (0, 1], got " + std::to_string(spec.cfl));
  }
  if (!(spec.T > 0.0)) throw ConfigError("time horizon T must be positive");

  double dt_max = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < grids.size(); ++e) {
    const Eigen::ArrayXd slowness =
        (coefficients.component(static_cast<int>(e), 0) *
         coefficients.component(static_cast<int>(e), 1)).sqrt();
    dt_max = std::min(dt_max, grids[e].dx * slowness.minCoeff());
  }

  double dt = spec.dt > 0.0 ? spec.dt : spec.cfl * dt_max;
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw ConfigError("time step " + std::to_string(dt) + " violates the CFL bound " +
                      std::to_string(dt_max));
  }

  TimeGrid tg;
  tg.T = spec.T;
  tg.steps = static_cast<int>(std::ceil(spec.T / dt - 1e-12));
  tg.dt = spec.T / tg.steps;
  tg.times = Eigen::ArrayXd::LinSpaced(2 * tg.steps + 1, -spec.T, spec.T);
  return tg;
}

}  // namespace tgn
