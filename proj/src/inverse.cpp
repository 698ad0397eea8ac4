#include "telegraphnet/inverse.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"

namespace tgn {

Assumption2Result assumption2_on_interval(const Eigen::ArrayXd& x, const Profile& z1_current,
                                          const Profile& z1_voltage, const Profile& z2_current,
                                          const Profile& z2_voltage, double threshold_factor) {
  Assumption2Result res;
  res.min_abs_det = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double z11 = z1_current(xi), z12 = z1_voltage(xi);
    const double z21 = z2_current(xi), z22 = z2_voltage(xi);
    const double dz11 = z1_current.df(xi), dz12 = z1_voltage.df(xi);
    const double dz21 = z2_current.df(xi), dz22 = z2_voltage.df(xi);
    // The 4x4 determinant factors into two 2x2 blocks.
    const double block_a = dz12 * z21 - dz22 * z11;
    const double block_b = dz11 * z22 - dz21 * z12;
    const double det = block_a * block_b;
    scale = std::max({scale, std::abs(z11), std::abs(z12), std::abs(z21), std::abs(z22),
                      std::abs(dz11), std::abs(dz12), std::abs(dz21), std::abs(dz22)});
    if (std::abs(det) < res.min_abs_det) {
      res.min_abs_det = std::abs(det);
      res.x = xi;
    }
  }
  res.threshold = threshold_factor * std::pow(std::max(scale, 1e-300), 4);
  res.pass = res.min_abs_det > res.threshold;
  return res;
}

Assumption2Result check_assumption2(const NetworkTopology& topology,
                                    const std::vector<EdgeGrid>& grids,
                                    const ExperimentPair& experiments,
                                    double threshold_factor) {
  Assumption2Result worst;
  worst.pass = true;
  worst.min_abs_det = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < grids.size(); ++e) {
    Assumption2Result r = assumption2_on_interval(
        grids[e].x, experiments.first.initial_current[e], experiments.first.initial_voltage[e],
        experiments.second.initial_current[e], experiments.second.initial_voltage[e],
        threshold_factor);
    r.edge_id = topology.edges[e].id;
    if (r.min_abs_det < worst.min_abs_det) {
      worst.min_abs_det = r.min_abs_det;
      worst.edge_id = r.edge_id;
      worst.x = r.x;
      worst.threshold = r.threshold;
    }
    worst.pass = worst.pass && r.pass;
  }
  return worst;
}

DifferenceField difference_field(const FieldTrajectory& u, const FieldTrajectory& v,
                                 const CoefficientField& p, const CoefficientField& q,
                                 bool check_residual) {
  if (u.u1.size() != v.u1.size() || u.time.size() != v.time.size() ||
      std::abs(u.time.dt - v.time.dt) > 1e-15) {
    throw ConfigError("difference_field: trajectories live on different grids");
  }

  DifferenceField out;
  out.w = u;
  out.w.first_level = std::max(u.first_level, v.first_level);
  out.w.last_level = std::min(u.last_level, v.last_level);
  const std::size_t ne = u.u1.size();
  out.f1.resize(ne);
  out.f2.resize(ne);

  const double dt = u.time.dt;
  const int lo = out.w.first_level, hi = out.w.last_level;
  for (std::size_t e = 0; e < ne; ++e) {
    if (u.u1[e].rows() != v.u1[e].rows()) {
      throw ConfigError("difference_field: trajectories live on different grids");
    }
    out.w.u1[e] = u.u1[e] - v.u1[e];
    out.w.u2[e] = u.u2[e] - v.u2[e];
    const Eigen::ArrayXd rho1 = (q.p[e][0] - p.p[e][0]);
    const Eigen::ArrayXd rho2 = (q.p[e][1] - p.p[e][1]);
    const Eigen::ArrayXd rho3 = (q.p[e][2] - p.p[e][2]);
    const Eigen::ArrayXd rho4 = (q.p[e][3] - p.p[e][3]);
    out.f1[e] = Eigen::MatrixXd::Zero(u.u1[e].rows(), u.u1[e].cols());
    out.f2[e] = Eigen::MatrixXd::Zero(u.u1[e].rows(), u.u1[e].cols());
    for (int m = lo; m <= hi; ++m) {
      Eigen::ArrayXd v1t(u.u1[e].rows()), v2t(u.u1[e].rows());
      if (m > lo && m < hi) {
        v1t = (v.u1[e].col(m + 1) - v.u1[e].col(m - 1)).array() / (2.0 * dt);
        v2t = (v.u2[e].col(m + 1) - v.u2[e].col(m - 1)).array() / (2.0 * dt);
      } else if (m == lo) {
        v1t = (-3.0 * v.u1[e].col(m) + 4.0 * v.u1[e].col(m + 1) - v.u1[e].col(m + 2)).array() /
              (2.0 * dt);
        v2t = (-3.0 * v.u2[e].col(m) + 4.0 * v.u2[e].col(m + 1) - v.u2[e].col(m + 2)).array() /
              (2.0 * dt);
      } else {
        v1t = (3.0 * v.u1[e].col(m) - 4.0 * v.u1[e].col(m - 1) + v.u1[e].col(m - 2)).array() /
              (2.0 * dt);
        v2t = (3.0 * v.u2[e].col(m) - 4.0 * v.u2[e].col(m - 1) + v.u2[e].col(m - 2)).array() /
              (2.0 * dt);
      }
      out.f1[e].col(m) = (rho1 * v1t + rho3 * v.u1[e].col(m).array()).matrix();
      out.f2[e].col(m) = (rho2 * v2t + rho4 * v.u2[e].col(m).array()).matrix();
    }
  }

  if (check_residual) {
    const OperatorResult lw = apply_operator(p, out.w);
    for (std::size_t e = 0; e < ne; ++e) {
      // Skip the outermost levels where one-sided stencils meet scheme error.
      for (int m = lo + 1; m < hi; ++m) {
        out.residual = std::max(out.residual,
                                (lw.f1[e].col(m) - out.f1[e].col(m)).cwiseAbs().maxCoeff());
        out.residual = std::max(out.residual,
                                (lw.f2[e].col(m) - out.f2[e].col(m)).cwiseAbs().maxCoeff());
      }
    }
  }
  return out;
}

TimeDerivativeData algebraic_forward_map(const NetworkTopology& topology,
                                         const std::vector<EdgeGrid>& grids,
                                         const ExperimentPair& experiments,
                                         const CoefficientField& p, const CoefficientField& q,
                                         const SampledPerturbation& rho) {
  (void)topology;
  TimeDerivativeData data;
  data.edges.resize(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    const Eigen::ArrayXd& x = grids[e].x;
    for (int m = 0; m < 2; ++m) {
      const ProblemData& exp = experiments.get(m);
      Eigen::ArrayXd dtw1(x.size()), dtw2(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double z1 = exp.initial_current[e](x[i]);
        const double z2 = exp.initial_voltage[e](x[i]);
        const double dz1 = exp.initial_current[e].df(x[i]);
        const double dz2 = exp.initial_voltage[e].df(x[i]);
        const double q1 = q.p[e][0][i], q2 = q.p[e][1][i];
        const double q3 = q.p[e][2][i], q4 = q.p[e][3][i];
        dtw1[i] = (-rho[e][0][i] * (dz2 + q3 * z1) / q1 + rho[e][2][i] * z1) / p.p[e][0][i];
        dtw2[i] = (-rho[e][1][i] * (dz1 + q4 * z2) / q2 + rho[e][3][i] * z2) / p.p[e][1][i];
      }
      data.edges[e][static_cast<std::size_t>(m)][0] = std::move(dtw1);
      data.edges[e][static_cast<std::size_t>(m)][1] = std::move(dtw2);
    }
  }
  return data;
}

TimeDerivativeData time_derivative_from_simulation(const FieldTrajectory& w1,
                                                   const FieldTrajectory& w2) {
  const int i0 = w1.time.index0();
  if (w1.first_level > i0 - 2 || w1.last_level < i0 + 2) {
    throw ConfigError("time derivative at t=0 needs two stored levels on each side of zero");
  }
  TimeDerivativeData data;
  data.edges.resize(w1.u1.size());
  const std::array<const FieldTrajectory*, 2> w{&w1, &w2};

  // Within the stencil's time span the few nodes next to each vertex see the
  // coupling solve rather than the interior scheme; their samples are replaced
  // by quadratic extrapolation from clean interior nodes.
  auto clean_ends = [](Eigen::ArrayXd& a) {
    const Eigen::Index n = a.size();
    if (n < 7) return;
    for (Eigen::Index k = 0; k < 3; ++k) {
      const auto d = static_cast<double>(3 - k);  // distance from node 3
      a[k] = 0.5 * (d + 1.0) * (d + 2.0) * a[3] - d * (d + 2.0) * a[4] +
             0.5 * d * (d + 1.0) * a[5];
      a[n - 1 - k] = 0.5 * (d + 1.0) * (d + 2.0) * a[n - 4] - d * (d + 2.0) * a[n - 5] +
                     0.5 * d * (d + 1.0) * a[n - 6];
    }
  };

  for (std::size_t e = 0; e < w1.u1.size(); ++e) {
    for (int m = 0; m < 2; ++m) {
      const FieldTrajectory& traj = *w[static_cast<std::size_t>(m)];
      const double dt = traj.time.dt;
      auto stencil = [&](const Eigen::MatrixXd& u) -> Eigen::ArrayXd {
        return (-u.col(i0 + 2) + 8.0 * u.col(i0 + 1) - 8.0 * u.col(i0 - 1) + u.col(i0 - 2))
                   .array() / (12.0 * dt);
      };
      for (int c = 0; c < 2; ++c) {
        Eigen::ArrayXd a = stencil(c == 0 ? traj.u1[e] : traj.u2[e]);
        clean_ends(a);
        data.edges[e][static_cast<std::size_t>(m)][static_cast<std::size_t>(c)] = std::move(a);
      }
    }
  }
  return data;
}

DirectReconstruction direct_reconstruct_t0(const NetworkTopology& topology,
                                           const std::vector<EdgeGrid>& grids,
                                           const TimeDerivativeData& data,
                                           const ExperimentPair& experiments,
                                           const CoefficientField& q,
                                           const CoefficientField& p, double condition_limit) {
  (void)topology;
  DirectReconstruction out;
  out.rho.resize(grids.size());

  for (std::size_t e = 0; e < grids.size(); ++e) {
    const Eigen::ArrayXd& x = grids[e].x;
    const Eigen::Index n = x.size();
    for (int c = 0; c < 4; ++c) out.rho[e][static_cast<std::size_t>(c)].setZero(n);
    std::vector<bool> flagged(static_cast<std::size_t>(n), false);

    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Matrix4d mat = Eigen::Matrix4d::Zero();
      Eigen::Vector4d rhs;
      for (int m = 0; m < 2; ++m) {
        const ProblemData& exp = experiments.get(m);
        const double z1 = exp.initial_current[e](x[i]);
        const double z2 = exp.initial_voltage[e](x[i]);
        const double dz1 = exp.initial_current[e].df(x[i]);
        const double dz2 = exp.initial_voltage[e].df(x[i]);
        const double q1 = q.p[e][0][i], q2 = q.p[e][1][i];
        const double q3 = q.p[e][2][i], q4 = q.p[e][3][i];
        mat(2 * m, 0) = -(dz2 + q3 * z1) / q1;
        mat(2 * m, 2) = z1;
        mat(2 * m + 1, 1) = -(dz1 + q4 * z2) / q2;
        mat(2 * m + 1, 3) = z2;
        rhs[2 * m] = p.p[e][0][i] * data.edges[e][static_cast<std::size_t>(m)][0][i];
        rhs[2 * m + 1] = p.p[e][1][i] * data.edges[e][static_cast<std::size_t>(m)][1][i];
      }
      const Eigen::JacobiSVD<Eigen::Matrix4d> svd(mat,
                                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double smin = svd.singularValues()(3);
      const double smax = svd.singularValues()(0);
      if (!(smin > 0.0) || smax / smin > condition_limit) {
        flagged[static_cast<std::size_t>(i)] = true;
        ++out.flagged_points;
        continue;
      }
      const Eigen::Vector4d sol = svd.solve(rhs);
      for (int c = 0; c < 4; ++c) out.rho[e][static_cast<std::size_t>(c)][i] = sol[c];
    }

    // Fill flagged points from the nearest solved neighbors.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!flagged[static_cast<std::size_t>(i)]) continue;
      Eigen::Index left = i, right = i;
      while (left >= 0 && flagged[static_cast<std::size_t>(left)]) --left;
      while (right < n && flagged[static_cast<std::size_t>(right)]) ++right;
      for (int c = 0; c < 4; ++c) {
        auto& arr = out.rho[e][static_cast<std::size_t>(c)];
        if (left >= 0 && right < n) {
          const double wgt = static_cast<double>(i - left) / static_cast<double>(right - left);
          arr[i] = (1.0 - wgt) * arr[left] + wgt * arr[right];
        } else if (left >= 0) {
          arr[i] = arr[left];
        } else if (right < n) {
          arr[i] = arr[right];
        }
      }
    }
  }
  return out;
}

double perturbation_relative_error(const std::vector<EdgeGrid>& grids,
                                   const SampledPerturbation& recovered,
                                   const SampledPerturbation& truth) {
  auto trapz_sq = [](const Eigen::ArrayXd& f, double dx) {
    const Eigen::ArrayXd g = f.square();
    return (g.sum() - 0.5 * (g[0] + g[g.size() - 1])) * dx;
  };
  double num = 0.0, den = 0.0;
  for (std::size_t e = 0; e < grids.size(); ++e) {
    for (int c = 0; c < 4; ++c) {
      const auto& r = recovered[e][static_cast<std::size_t>(c)];
      const auto& t = truth[e][static_cast<std::size_t>(c)];
      num += trapz_sq(r - t, grids[e].dx);
      den += trapz_sq(t, grids[e].dx);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

SampledPerturbation sample_perturbation(const std::vector<EdgeGrid>& grids,
                                        const CoefficientProfiles& rho, double eps) {
  SampledPerturbation out(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    for (int c = 0; c < 4; ++c) {
      Eigen::ArrayXd arr(grids[e].x.size());
      for (Eigen::Index i = 0; i < arr.size(); ++i) {
        arr[i] = eps * rho.eval(static_cast<int>(e), c, grids[e].x[i]);
      }
      out[e][static_cast<std::size_t>(c)] = std::move(arr);
    }
  }
  return out;
}

}  // namespace tgn
