#include "telegraphnet/energy.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"

namespace tgn {

namespace {

double trapz(const Eigen::ArrayXd& f, double dx) {
  return (f.sum() - 0.5 * (f[0] + f[f.size() - 1])) * dx;
}

double energy_at_level(const FieldTrajectory& traj, const CoefficientField& coeffs, int level) {
  double e_total = 0.0;
  for (std::size_t e = 0; e < traj.u1.size(); ++e) {
    const Eigen::ArrayXd u1 = traj.u1[e].col(level).array();
    const Eigen::ArrayXd u2 = traj.u2[e].col(level).array();
    const Eigen::ArrayXd integrand =
        coeffs.component(static_cast<int>(e), 0) * u1.square() +
        coeffs.component(static_cast<int>(e), 1) * u2.square();
    e_total += trapz(integrand, traj.grids[e].dx);
  }
  return e_total;
}

}  // namespace

double energy(const FieldTrajectory& traj, const CoefficientField& coefficients, double t) {
  return energy_at_level(traj, coefficients, traj.level_at(t));
}

Eigen::MatrixX2d energy_history(const FieldTrajectory& traj,
                                const CoefficientField& coefficients) {
  const int lo = traj.first_level, hi = traj.last_level;
  Eigen::MatrixX2d out(hi - lo + 1, 2);
  for (int m = lo; m <= hi; ++m) {
    out(m - lo, 0) = traj.time.times[m];
    out(m - lo, 1) = energy_at_level(traj, coefficients, m);
  }
  return out;
}

EnergyBoundReport energy_bound_report(const FieldTrajectory& traj,
                                      const CoefficientField& coefficients) {
  (void)coefficients;
  const int lo = traj.first_level, hi = traj.last_level;
  if (hi - lo + 1 < 5) {
    throw ConfigError("energy bound report needs at least 5 stored levels "
                      "(5-point stencil for third time derivatives)");
  }

  // Valid centered range for the widest (5-point) stencil.
  const int first = lo + 2, last = hi - 2;
  EnergyBoundReport report;
  report.per_time = Eigen::ArrayXd::Zero(last - first + 1);
  report.times = traj.time.times.segment(first, last - first + 1);
  const double dt = traj.time.dt;

  for (std::size_t e = 0; e < traj.u1.size(); ++e) {
    const double dx = traj.grids[e].dx;
    const Eigen::Index rows = traj.u1[e].rows();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double wx = (i == 0 || i == rows - 1) ? 0.5 * dx : dx;
      for (int m = first; m <= last; ++m) {
        double s = 0.0;
        for (const Eigen::MatrixXd* u : {&traj.u1[e], &traj.u2[e]}) {
          const auto& row = *u;
          const double f0 = row(i, m);
          const double d1 = (row(i, m + 1) - row(i, m - 1)) / (2.0 * dt);
          const double d2 = (row(i, m + 1) - 2.0 * f0 + row(i, m - 1)) / (dt * dt);
          const double d3 = (row(i, m + 2) - 2.0 * row(i, m + 1) + 2.0 * row(i, m - 1) -
                             row(i, m - 2)) / (2.0 * dt * dt * dt);
          s += f0 * f0 + d1 * d1 + d2 * d2 + d3 * d3;
        }
        report.per_time[m - first] += wx * s;
      }
    }
  }

  Eigen::Index arg = 0;
  report.bound = report.per_time.maxCoeff(&arg);
  report.argmax_t = report.times[arg];
  return report;
}

}  // namespace tgn
