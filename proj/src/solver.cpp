#include "telegraphnet/solver.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"

namespace tgn {

namespace {

// (1 - exp(-a*tau))/a with the a -> 0 limit.
inline double decay_weight(double a, double tau) {
  if (std::abs(a * tau) < 1e-14) return tau;
  return -std::expm1(-a * tau) / a;
}

struct EdgeState {
  Eigen::ArrayXd u1, u2;
};

// Quadratic Lagrange interpolation of w at offset xi in [-1, 1] from the
// stencil values (w_{m-1}, w_m, w_{m+1}).
inline double lagrange3(double wm1, double w0, double wp1, double xi) {
  return wm1 * 0.5 * xi * (xi - 1.0) + w0 * (1.0 - xi * xi) + wp1 * 0.5 * xi * (xi + 1.0);
}

class Stepper {
 public:
  Stepper(const NetworkTopology& topology, const CoefficientField& coeffs,
          const ProblemData& data, const std::vector<EdgeGrid>& grids)
      : topo_(topology), coeffs_(coeffs), data_(data), grids_(grids) {
    const std::size_t ne = grids.size();
    speed_.resize(ne);
    impedance_.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      speed_[e] = coeffs.wave_speed(static_cast<int>(e));
      impedance_[e] = coeffs.impedance(static_cast<int>(e));
    }
  }

  void step(std::vector<EdgeState>& state, double t, double dt) const {
    half_reaction(state, t + 0.25 * dt, 0.5 * dt);
    advect(state, t + dt, dt);
    half_reaction(state, t + 0.75 * dt, 0.5 * dt);
  }

 private:
  void half_reaction(std::vector<EdgeState>& state, double t_mid, double tau) const {
    for (std::size_t e = 0; e < state.size(); ++e) {
      const auto& p = coeffs_.p[e];
      const Eigen::ArrayXd& x = grids_[e].x;
      auto& s = state[e];
      const bool src1 = e < data_.source_current.size() && data_.source_current[e];
      const bool src2 = e < data_.source_voltage.size() && data_.source_voltage[e];
      for (Eigen::Index i = 0; i < s.u1.size(); ++i) {
        const double a1 = p[2][i] / p[0][i];
        const double a2 = p[3][i] / p[1][i];
        double b1 = 0.0, b2 = 0.0;
        if (src1) b1 = data_.source_current[e](x[i], t_mid) / p[0][i];
        if (src2) b2 = data_.source_voltage[e](x[i], t_mid) / p[1][i];
        s.u1[i] = std::exp(-a1 * tau) * s.u1[i] + b1 * decay_weight(a1, tau);
        s.u2[i] = std::exp(-a2 * tau) * s.u2[i] + b2 * decay_weight(a2, tau);
      }
    }
  }

  void advect(std::vector<EdgeState>& state, double t_new, double dt) const {
    const bool reversed = dt < 0.0;
    const std::size_t ne = state.size();
    std::vector<EdgeState> next(ne);
    std::vector<std::array<double, 2>> incoming(ne);  // [0]: at init node, [1]: at term node

    for (std::size_t e = 0; e < ne; ++e) {
      const EdgeGrid& g = grids_[e];
      const auto& s = state[e];
      const Eigen::ArrayXd& c = speed_[e];
      const Eigen::ArrayXd& Z = impedance_[e];
      next[e].u1.resize(g.n + 1);
      next[e].u2.resize(g.n + 1);

      auto trace = [&](Eigen::Index i, double sigma) {
        // Characteristic w_sigma = u2 + sigma*Z_i*u1 transported at sigma*c_i.
        const double foot = g.x[i] - sigma * c[i] * dt;
        Eigen::Index m = static_cast<Eigen::Index>(std::lround((foot - g.x[0]) / g.dx));
        m = std::clamp<Eigen::Index>(m, 1, g.n - 1);
        const double xi = (foot - g.x[m]) / g.dx;
        const double zi = sigma * Z[i];
        return lagrange3(s.u2[m - 1] + zi * s.u1[m - 1], s.u2[m] + zi * s.u1[m],
                         s.u2[m + 1] + zi * s.u1[m + 1], xi);
      };

      for (Eigen::Index i = 1; i < g.n; ++i) {
        const double wp = trace(i, +1.0);
        const double wm = trace(i, -1.0);
        next[e].u2[i] = 0.5 * (wp + wm);
        next[e].u1[i] = 0.5 * (wp - wm) / Z[i];
      }
      // The characteristic arriving at each endpoint from the interior.
      incoming[e][0] = trace(0, reversed ? +1.0 : -1.0);
      incoming[e][1] = trace(g.n, reversed ? -1.0 : +1.0);
    }

    // Vertex systems close the remaining endpoint values.
    for (const auto& [k, xk] : topo_.coordinates) {
      std::vector<VertexPort> ports;
      std::vector<std::pair<std::size_t, bool>> where;  // (edge index, at terminal)
      auto add_port = [&](int j, bool at_term) {
        const auto e = static_cast<std::size_t>(topo_.edge_index(j));
        VertexPort port;
        port.incoming = incoming[e][at_term ? 1 : 0];
        port.impedance = at_term ? impedance_[e][grids_[e].n] : impedance_[e][0];
        port.at_terminal = at_term;
        ports.push_back(port);
        where.emplace_back(e, at_term);
      };
      for (int j : topo_.ending(k)) add_port(j, true);
      for (int j : topo_.starting(k)) add_port(j, false);

      VertexSolution sol;
      if (topo_.boundary_vertices.count(k)) {
        sol.voltage = data_.boundary(k, t_new);
        sol.currents.resize(static_cast<Eigen::Index>(ports.size()));
        for (std::size_t q = 0; q < ports.size(); ++q) {
          const double eta = (ports[q].at_terminal != reversed) ? 1.0 : -1.0;
          sol.currents[static_cast<Eigen::Index>(q)] =
              eta * (ports[q].incoming - sol.voltage) / ports[q].impedance;
        }
      } else {
        sol = couple_vertex(ports, reversed);
      }
      for (std::size_t q = 0; q < where.size(); ++q) {
        const auto [e, at_term] = where[q];
        const Eigen::Index i = at_term ? grids_[e].n : 0;
        next[e].u2[i] = sol.voltage;
        next[e].u1[i] = sol.currents[static_cast<Eigen::Index>(q)];
      }
    }

    state = std::move(next);
  }

  const NetworkTopology& topo_;
  const CoefficientField& coeffs_;
  const ProblemData& data_;
  const std::vector<EdgeGrid>& grids_;
  std::vector<Eigen::ArrayXd> speed_, impedance_;
};

}  // namespace

VertexSolution couple_vertex(const std::vector<VertexPort>& ports, bool reversed) {
  double num = 0.0, den = 0.0;
  for (const VertexPort& p : ports) {
    if (!(p.impedance > 0.0) || !std::isfinite(p.impedance)) {
      throw DomainError("vertex coupling: non-positive or non-finite impedance");
    }
    num += p.incoming / p.impedance;
    den += 1.0 / p.impedance;
  }
  VertexSolution sol;
  sol.voltage = num / den;
  sol.currents.resize(static_cast<Eigen::Index>(ports.size()));
  for (std::size_t q = 0; q < ports.size(); ++q) {
    const double eta = (ports[q].at_terminal != reversed) ? 1.0 : -1.0;
    sol.currents[static_cast<Eigen::Index>(q)] =
        eta * (ports[q].incoming - sol.voltage) / ports[q].impedance;
  }
  return sol;
}

FieldTrajectory solve(const NetworkTopology& topology, const CoefficientField& coefficients,
                      const ProblemData& data, const std::vector<EdgeGrid>& grids,
                      const TimeGrid& time, SolveDirection direction) {
  if (data.initial_current.size() != grids.size() || data.initial_voltage.size() != grids.size()) {
    throw ConfigError("initial data must provide one profile pair per edge");
  }

  FieldTrajectory traj;
  traj.grids = grids;
  traj.time = time;
  traj.u1.resize(grids.size());
  traj.u2.resize(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    traj.u1[e] = Eigen::MatrixXd::Zero(grids[e].n + 1, time.size());
    traj.u2[e] = Eigen::MatrixXd::Zero(grids[e].n + 1, time.size());
  }

  const double corner = corner_mismatch(topology, data);
  if (corner > 1e-10) {
    traj.warnings.push_back("corner data mismatch at t=0: " + std::to_string(corner));
  }
  const double vertex_mismatch = initial_vertex_mismatch(topology, data);
  if (vertex_mismatch > 1e-10) {
    traj.warnings.push_back("initial data violates vertex conditions by " +
                            std::to_string(vertex_mismatch));
  }

  std::vector<EdgeState> initial(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    initial[e].u1.resize(grids[e].n + 1);
    initial[e].u2.resize(grids[e].n + 1);
    for (Eigen::Index i = 0; i <= grids[e].n; ++i) {
      initial[e].u1[i] = data.initial_current[e](grids[e].x[i]);
      initial[e].u2[i] = data.initial_voltage[e](grids[e].x[i]);
    }
  }

  const int i0 = time.index0();
  auto store = [&](const std::vector<EdgeState>& state, int level) {
    for (std::size_t e = 0; e < state.size(); ++e) {
      traj.u1[e].col(level) = state[e].u1.matrix();
      traj.u2[e].col(level) = state[e].u2.matrix();
    }
  };
  store(initial, i0);

  Stepper stepper(topology, coefficients, data, grids);
  traj.first_level = i0;
  traj.last_level = i0;

  if (direction == SolveDirection::Forward || direction == SolveDirection::Both) {
    std::vector<EdgeState> state = initial;
    for (int m = 0; m < time.steps; ++m) {
      stepper.step(state, m * time.dt, time.dt);
      store(state, i0 + m + 1);
    }
    traj.last_level = 2 * time.steps;
  }
  if (direction == SolveDirection::Backward || direction == SolveDirection::Both) {
    std::vector<EdgeState> state = std::move(initial);
    for (int m = 0; m < time.steps; ++m) {
      stepper.step(state, -m * time.dt, -time.dt);
      store(state, i0 - m - 1);
    }
    traj.first_level = 0;
  }
  return traj;
}

OperatorResult apply_operator(const CoefficientField& coefficients,
                              const FieldTrajectory& field) {
  OperatorResult out;
  const std::size_t ne = field.u1.size();
  out.f1.resize(ne);
  out.f2.resize(ne);
  const double dt = field.time.dt;
  const int lo = field.first_level;
  const int hi = field.last_level;

  for (std::size_t e = 0; e < ne; ++e) {
    const Eigen::MatrixXd& u1 = field.u1[e];
    const Eigen::MatrixXd& u2 = field.u2[e];
    const double dx = field.grids[e].dx;
    const auto& p = coefficients.p[e];
    const Eigen::Index rows = u1.rows();
    out.f1[e] = Eigen::MatrixXd::Zero(rows, u1.cols());
    out.f2[e] = Eigen::MatrixXd::Zero(rows, u1.cols());

    auto dt_of = [&](const Eigen::MatrixXd& u, Eigen::Index i, int m) {
      if (m > lo && m < hi) return (u(i, m + 1) - u(i, m - 1)) / (2.0 * dt);
      if (m == lo) return (-3.0 * u(i, m) + 4.0 * u(i, m + 1) - u(i, m + 2)) / (2.0 * dt);
      return (3.0 * u(i, m) - 4.0 * u(i, m - 1) + u(i, m - 2)) / (2.0 * dt);
    };
    auto dx_of = [&](const Eigen::MatrixXd& u, Eigen::Index i, int m) {
      if (i > 0 && i < rows - 1) return (u(i + 1, m) - u(i - 1, m)) / (2.0 * dx);
      if (i == 0) return (-3.0 * u(0, m) + 4.0 * u(1, m) - u(2, m)) / (2.0 * dx);
      return (3.0 * u(i, m) - 4.0 * u(i - 1, m) + u(i - 2, m)) / (2.0 * dx);
    };

    for (int m = lo; m <= hi; ++m) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        out.f1[e](i, m) = p[0][i] * dt_of(u1, i, m) + dx_of(u2, i, m) + p[2][i] * u1(i, m);
        out.f2[e](i, m) = dx_of(u1, i, m) + p[1][i] * dt_of(u2, i, m) + p[3][i] * u2(i, m);
      }
    }
  }
  return out;
}

}  // namespace tgn
