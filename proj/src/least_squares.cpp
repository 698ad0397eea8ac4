#include "telegraphnet/least_squares.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"
#include "telegraphnet/util.hpp"

namespace tgn {

namespace {

// q = p + per-edge constants, without the vertex-consistency validation:
// Gauss-Newton probes single edges, which transiently breaks consistency.
CoefficientField apply_packed(const CoefficientField& p, const Eigen::VectorXd& rho) {
  CoefficientField q = p;
  for (std::size_t e = 0; e < q.p.size(); ++e) {
    for (int c = 0; c < 4; ++c) {
      q.p[e][static_cast<std::size_t>(c)] += rho[static_cast<Eigen::Index>(4 * e) + c];
    }
  }
  return q;
}

bool admissible(const CoefficientField& q) {
  for (const auto& edge : q.p) {
    if (edge[0].minCoeff() < q.bounds.lower1 || edge[1].minCoeff() < q.bounds.lower2 ||
        edge[2].minCoeff() < 0.0 || edge[3].minCoeff() < 0.0) {
      return false;
    }
  }
  return true;
}

struct TraceResiduals {
  Eigen::VectorXd values;
};

}  // namespace

CoefficientProfiles perturbation_profiles(const NetworkTopology& topology,
                                          const Eigen::VectorXd& rho_packed) {
  CoefficientProfiles out;
  out.edges.resize(topology.edges.size());
  for (std::size_t e = 0; e < out.edges.size(); ++e) {
    for (int c = 0; c < 4; ++c) {
      out.edges[e][static_cast<std::size_t>(c)] =
          constant_profile(rho_packed[static_cast<Eigen::Index>(4 * e) + c]);
    }
  }
  return out;
}

void add_trace_noise(MeasurementSet& set, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  set.data_norm = 0.0;
  set.l0_norm = 0.0;
  auto trapz = [&](const Eigen::ArrayXd& g) {
    return (g.sum() - 0.5 * (g[0] + g[g.size() - 1])) * set.dt;
  };
  for (LeafTrace& t : set.traces) {
    for (Eigen::Index i = 0; i < t.u1.size(); ++i) t.u1[i] += noise(rng);
    t.d1 = derivative_in_time(t.u1, set.dt, 1);
    t.d2 = derivative_in_time(t.u1, set.dt, 2);
    set.data_norm += trapz(t.d1.square()) + trapz(t.d2.square());
    set.l0_norm += trapz(t.u1.square());
  }
}

namespace {

class Objective {
 public:
  Objective(const NetworkTopology& topology, const CoefficientField& p,
            const ExperimentPair& experiments, const std::array<MeasurementSet, 2>& measured,
            const std::vector<EdgeGrid>& grids, const TimeGrid& time, const LsqOptions& opt)
      : topo_(topology), p_(p), experiments_(experiments), measured_(measured), grids_(grids),
        time_(time), opt_(opt) {
    for (int m = 0; m < 2; ++m) {
      base_[static_cast<std::size_t>(m)] =
          solve(topology, p, experiments.get(m), grids, time, SolveDirection::Both);
    }
    // Quadrature weights shared by all traces (same time grid).
    const Eigen::Index len = measured_[0].traces.empty() ? 0 : measured_[0].traces[0].u1.size();
    weights_ = Eigen::ArrayXd::Constant(len, std::sqrt(measured_[0].dt));
    if (len > 1) {
      weights_[0] *= std::sqrt(0.5);
      weights_[len - 1] *= std::sqrt(0.5);
    }
  }

  // Weighted residual vector; empty optional-like flag via thrown DomainError
  // is avoided: inadmissible q returns false.
  bool residual(const Eigen::VectorXd& rho, Eigen::VectorXd& out) const {
    const CoefficientField q = apply_packed(p_, rho);
    if (!admissible(q)) return false;

    std::vector<double> entries;
    for (int m = 0; m < 2; ++m) {
      const FieldTrajectory v =
          solve(topo_, q, experiments_.get(m), grids_, time_, SolveDirection::Both);
      const DifferenceField diff =
          difference_field(base_[static_cast<std::size_t>(m)], v, p_, q);
      const MeasurementSet sim = boundary_trace(diff.w, topo_);
      const MeasurementSet& meas = measured_[static_cast<std::size_t>(m)];
      if (sim.traces.size() != meas.traces.size()) {
        throw ConfigError("measured and simulated trace sets disagree in shape");
      }
      for (std::size_t t = 0; t < sim.traces.size(); ++t) {
        const Eigen::ArrayXd r1 = (sim.traces[t].d1 - meas.traces[t].d1) * weights_;
        const Eigen::ArrayXd r2 = (sim.traces[t].d2 - meas.traces[t].d2) * weights_;
        entries.insert(entries.end(), r1.data(), r1.data() + r1.size());
        entries.insert(entries.end(), r2.data(), r2.data() + r2.size());
      }
    }
    const double sqrt_lambda = std::sqrt(opt_.lambda);
    for (Eigen::Index i = 0; i < rho.size(); ++i) entries.push_back(sqrt_lambda * rho[i]);
    out = Eigen::Map<Eigen::VectorXd>(entries.data(), static_cast<Eigen::Index>(entries.size()));
    return true;
  }

 private:
  const NetworkTopology& topo_;
  const CoefficientField& p_;
  const ExperimentPair& experiments_;
  const std::array<MeasurementSet, 2>& measured_;
  const std::vector<EdgeGrid>& grids_;
  const TimeGrid& time_;
  const LsqOptions& opt_;
  std::array<FieldTrajectory, 2> base_;
  Eigen::ArrayXd weights_;
};

}  // namespace

std::array<MeasurementSet, 2> synthesize_measurements(const NetworkTopology& topology,
                                                      const CoefficientProfiles& p_profiles,
                                                      const Eigen::VectorXd& rho_true,
                                                      const ExperimentPair& experiments,
                                                      const GridSpec& grid) {
  const auto grids = make_edge_grids(topology, grid);
  const CoefficientField p = sample_coefficients(topology, grids, p_profiles);
  const TimeGrid time = make_time_grid(grid, grids, p);
  const CoefficientField q = apply_packed(p, rho_true);
  std::array<MeasurementSet, 2> out;
  for (int m = 0; m < 2; ++m) {
    const FieldTrajectory u =
        solve(topology, p, experiments.get(m), grids, time, SolveDirection::Both);
    const FieldTrajectory v =
        solve(topology, q, experiments.get(m), grids, time, SolveDirection::Both);
    const DifferenceField diff = difference_field(u, v, p, q);
    out[static_cast<std::size_t>(m)] = boundary_trace(diff.w, topology);
  }
  return out;
}

LsqResult least_squares_reconstruct(const NetworkTopology& topology,
                                    const CoefficientProfiles& p_profiles,
                                    const ExperimentPair& experiments,
                                    const std::array<MeasurementSet, 2>& measured,
                                    const GridSpec& grid, const LsqOptions& options) {
  if (options.lambda < 0.0) throw ConfigError("regularization weight must be nonnegative");
  const auto grids = make_edge_grids(topology, grid);
  const CoefficientField p = sample_coefficients(topology, grids, p_profiles);
  const TimeGrid time = make_time_grid(grid, grids, p);

  const Assumption2Result a2 = check_assumption2(topology, grids, experiments);
  if (!a2.pass) {
    throw DomainError("initial data fail the determinant assumption (min |det| = " +
                      std::to_string(a2.min_abs_det) + ")");
  }

  Objective objective(topology, p, experiments, measured, grids, time, options);
  const int unknowns = 4 * topology.edge_count;

  LsqResult result;
  result.rho = Eigen::VectorXd::Zero(unknowns);

  Eigen::VectorXd r;
  if (!objective.residual(result.rho, r)) {
    throw DomainError("initial guess is inadmissible");
  }
  double misfit = r.squaredNorm();
  result.misfit_history.push_back(misfit);

  int stalled = 0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (misfit <= options.misfit_tol) {
      result.converged = true;
      result.message = "misfit below tolerance";
      break;
    }

    // Forward-difference Jacobian, one forward solve per column.
    Eigen::MatrixXd jac(r.size(), unknowns);
    std::vector<Eigen::VectorXd> columns(static_cast<std::size_t>(unknowns));
    parallel_for(unknowns, options.threads, [&](int c) {
      Eigen::VectorXd probe = result.rho;
      probe[c] += options.fd_step;
      Eigen::VectorXd rp;
      if (objective.residual(probe, rp)) {
        columns[static_cast<std::size_t>(c)] = (rp - r) / options.fd_step;
      } else {
        probe[c] = result.rho[c] - options.fd_step;
        if (!objective.residual(probe, rp)) {
          throw DomainError("cannot probe unknown " + std::to_string(c) +
                            " without leaving the admissible class");
        }
        columns[static_cast<std::size_t>(c)] = (r - rp) / options.fd_step;
      }
    });
    for (int c = 0; c < unknowns; ++c) jac.col(c) = columns[static_cast<std::size_t>(c)];

    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
    if (step.norm() <= options.step_tol * std::max(1.0, result.rho.norm())) {
      result.converged = true;
      result.message = "step below tolerance";
      break;
    }

    // Damped update.
    double alpha = 1.0;
    bool improved = false;
    for (int half = 0; half < 8; ++half, alpha *= 0.5) {
      Eigen::VectorXd candidate = result.rho + alpha * step;
      Eigen::VectorXd rc;
      if (!objective.residual(candidate, rc)) continue;
      const double mc = rc.squaredNorm();
      if (mc < misfit) {
        result.rho = std::move(candidate);
        r = std::move(rc);
        misfit = mc;
        improved = true;
        break;
      }
    }
    result.iterations = iter + 1;
    result.misfit_history.push_back(misfit);

    if (!improved) {
      if (++stalled >= 3) {
        result.message = "non-decreasing misfit for 3 consecutive damped steps";
        break;
      }
    } else {
      stalled = 0;
    }
  }

  if (!result.converged && result.message.empty()) {
    if (misfit <= options.misfit_tol) {
      result.converged = true;
      result.message = "misfit below tolerance";
    } else {
      result.message = "iteration limit reached";
    }
  }
  return result;
}

}  // namespace tgn
