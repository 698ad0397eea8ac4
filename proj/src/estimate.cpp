#include "telegraphnet/estimate.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"

namespace tgn {

namespace {

double safe_log(double v, double offset) {
  return v > 0.0 ? std::log(v) + offset : -std::numeric_limits<double>::infinity();
}

}  // namespace

double CarlemanRow::lhs_log() const { return safe_log(lhs_scaled, log_offset); }
double CarlemanRow::rhs_log() const { return safe_log(rhs_scaled, log_offset); }
double CarlemanRow::btilde_log() const { return safe_log(btilde_scaled, log_offset); }

std::vector<double> default_s_grid(const NetworkTopology& topology,
                                   const WeightFamily& weights) {
  double scale = std::abs(weights.max_phi(topology));
  for (std::size_t e = 0; e < weights.edges.size(); ++e) {
    const Edge& edge = topology.edges[e];
    scale = std::max(scale, std::abs(weights.phi(static_cast<int>(e), edge.x_init, weights.T)));
  }
  if (!(scale > 0.0)) scale = 1.0;
  return {5.0 / scale, 10.0 / scale, 20.0 / scale, 40.0 / scale};
}

CarlemanReport evaluate_estimate(const NetworkTopology& topology, const WeightFamily& weights,
                                 const CoefficientField& coefficients,
                                 const FieldTrajectory& field,
                                 const std::vector<Eigen::MatrixXd>& f1,
                                 const std::vector<Eigen::MatrixXd>& f2,
                                 const std::vector<double>& s_values,
                                 double homogeneity_tol) {
  const auto a1 = check_assumption1(topology, weights, coefficients, field.grids, field.time);
  if (!a1.pass) {
    throw DomainError(
        "weight family fails the sign-definiteness assumption: min |p1 p2 |phi_t|^2 - "
        "|phi_x|^2| = " + std::to_string(a1.min_abs) + " at edge " +
        std::to_string(a1.edge_id) + ", x = " + std::to_string(a1.x) +
        ", t = " + std::to_string(a1.t));
  }

  CarlemanReport report;
  report.phi_max = weights.max_phi(topology);

  // Homogeneity of the field's side conditions (t = +-T and exterior voltage).
  {
    double worst = 0.0;
    for (std::size_t e = 0; e < field.u1.size(); ++e) {
      const int lo = field.first_level, hi = field.last_level;
      worst = std::max({worst, field.u1[e].col(lo).cwiseAbs().maxCoeff(),
                        field.u2[e].col(lo).cwiseAbs().maxCoeff(),
                        field.u1[e].col(hi).cwiseAbs().maxCoeff(),
                        field.u2[e].col(hi).cwiseAbs().maxCoeff()});
    }
    for (int k : topology.boundary_vertices) {
      for (int j : topology.starting(k)) {
        const auto e = static_cast<std::size_t>(topology.edge_index(j));
        worst = std::max(worst, field.u2[e].row(0).cwiseAbs().maxCoeff());
      }
      for (int j : topology.ending(k)) {
        const auto e = static_cast<std::size_t>(topology.edge_index(j));
        worst = std::max(worst, field.u2[e].row(field.u2[e].rows() - 1).cwiseAbs().maxCoeff());
      }
    }
    if (worst > homogeneity_tol) {
      report.warnings.push_back("field violates homogeneous side conditions by " +
                                std::to_string(worst));
    }
  }

  const std::vector<int> observed = topology.observed_leaf_edges();
  const int lo = field.first_level, hi = field.last_level;
  const double dt = field.time.dt;

  for (double s : s_values) {
    CarlemanRow row;
    row.s = s;
    row.log_offset = 2.0 * s * report.phi_max;

    double iu = 0.0, iff = 0.0, ib = 0.0;
    for (std::size_t e = 0; e < field.u1.size(); ++e) {
      const Eigen::ArrayXd& x = field.grids[e].x;
      const double dx = field.grids[e].dx;
      const Eigen::Index rows = x.size();
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double wx = (i == 0 || i == rows - 1) ? 0.5 * dx : dx;
        for (int m = lo; m <= hi; ++m) {
          const double wt = (m == lo || m == hi) ? 0.5 * dt : dt;
          const double phi = weights.phi(static_cast<int>(e), x[i], field.time.times[m]);
          const double w = std::exp(2.0 * s * (phi - report.phi_max)) * wx * wt;
          const double uu = field.u1[e](i, m) * field.u1[e](i, m) +
                            field.u2[e](i, m) * field.u2[e](i, m);
          const double ff = f1[e](i, m) * f1[e](i, m) + f2[e](i, m) * f2[e](i, m);
          iu += w * uu;
          iff += w * ff;
        }
      }
    }
    for (int j : observed) {
      const auto e = static_cast<std::size_t>(topology.edge_index(j));
      const Eigen::Index i = field.grids[e].x.size() - 1;
      const double xT = field.grids[e].x[i];
      for (int m = lo; m <= hi; ++m) {
        const double wt = (m == lo || m == hi) ? 0.5 * dt : dt;
        const double phi = weights.phi(static_cast<int>(e), xT, field.time.times[m]);
        ib += std::exp(2.0 * s * (phi - report.phi_max)) * wt * field.u1[e](i, m) *
              field.u1[e](i, m);
      }
    }

    row.lhs_scaled = s * s * iu;
    row.rhs_scaled = iff;
    row.btilde_scaled = s * ib;
    const double denom = row.rhs_scaled + row.btilde_scaled;
    row.ratio = denom > 0.0 ? row.lhs_scaled / denom : 0.0;
    report.rows.push_back(row);
    report.c_hat = std::max(report.c_hat, row.ratio);
  }
  return report;
}

}  // namespace tgn
