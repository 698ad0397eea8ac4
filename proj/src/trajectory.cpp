#include "telegraphnet/trajectory.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"

namespace tgn {

int FieldTrajectory::level_at(double t) const {
  const int level = time.index0() + static_cast<int>(std::lround(t / time.dt));
  if (level < first_level || level > last_level) {
    throw ConfigError("time " + std::to_string(t) + " outside the stored trajectory range");
  }
  return level;
}

KirchhoffResiduals kirchhoff_residuals(const NetworkTopology& topology,
                                       const FieldTrajectory& traj) {
  KirchhoffResiduals res;
  for (int k : topology.interior_vertices) {
    for (int m = traj.first_level; m <= traj.last_level; ++m) {
      double in = 0.0, out = 0.0;
      double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
      for (int j : topology.ending(k)) {
        const auto e = static_cast<std::size_t>(topology.edge_index(j));
        const Eigen::Index i = traj.u1[e].rows() - 1;
        in += traj.u1[e](i, m);
        vmin = std::min(vmin, traj.u2[e](i, m));
        vmax = std::max(vmax, traj.u2[e](i, m));
      }
      for (int j : topology.starting(k)) {
        const auto e = static_cast<std::size_t>(topology.edge_index(j));
        out += traj.u1[e](0, m);
        vmin = std::min(vmin, traj.u2[e](0, m));
        vmax = std::max(vmax, traj.u2[e](0, m));
      }
      res.max_current_imbalance = std::max(res.max_current_imbalance, std::abs(in - out));
      res.max_voltage_jump = std::max(res.max_voltage_jump, vmax - vmin);
    }
  }
  return res;
}

Eigen::ArrayXd derivative_in_time(const Eigen::ArrayXd& f, double dt, int order) {
  const Eigen::Index n = f.size();
  Eigen::ArrayXd d(n);
  if (order == 0) return f;
  if (n < 4) throw ConfigError("derivative_in_time needs at least 4 samples");
  if (order == 1) {
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    return d;
  }
  if (order == 2) {
    const double h2 = dt * dt;
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return d;
  }
  if (order == 3) {
    if (n < 5) throw ConfigError("third time derivative needs a 5-point stencil");
    const double h3 = 2.0 * dt * dt * dt;
    for (Eigen::Index i = 2; i + 2 < n; ++i) {
      d[i] = (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / h3;
    }
    d[0] = d[1] = d[2];
    d[n - 1] = d[n - 2] = d[n - 3];
    return d;
  }
  throw ConfigError("unsupported derivative order " + std::to_string(order));
}

MeasurementSet boundary_trace(const FieldTrajectory& traj, const NetworkTopology& topology) {
  MeasurementSet set;
  const int lo = traj.first_level;
  const int hi = traj.last_level;
  const Eigen::Index len = hi - lo + 1;
  set.times = traj.time.times.segment(lo, len);
  set.dt = traj.time.dt;

  for (int k : topology.boundary_vertices) {
    if (k == topology.root) continue;
    for (int j : topology.ending(k)) {
      const auto e = static_cast<std::size_t>(topology.edge_index(j));
      LeafTrace trace;
      trace.vertex = k;
      trace.edge_id = j;
      trace.u1 = traj.u1[e].row(traj.u1[e].rows() - 1).segment(lo, len).array();
      trace.d1 = derivative_in_time(trace.u1, traj.time.dt, 1);
      trace.d2 = derivative_in_time(trace.u1, traj.time.dt, 2);
      set.traces.push_back(std::move(trace));
    }
  }

  auto trapz = [&](const Eigen::ArrayXd& g) {
    double s = g.sum() - 0.5 * (g[0] + g[g.size() - 1]);
    return s * set.dt;
  };
  for (const LeafTrace& t : set.traces) {
    set.data_norm += trapz(t.d1.square()) + trapz(t.d2.square());
    set.l0_norm += trapz(t.u1.square());
  }
  return set;
}

}  // namespace tgn
