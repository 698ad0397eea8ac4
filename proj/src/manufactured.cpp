#include "telegraphnet/manufactured.hpp"

#include <cmath>
#include <map>

namespace tgn {

namespace {

// Cubic Hermite blend with zero end slopes plus an interior bump.
struct SpatialShape {
  double v0 = 0.0, v1 = 0.0, bump = 0.0;
  double x0 = 0.0, length = 1.0;

  double value(double x) const {
    const double xi = (x - x0) / length;
    const double b = 16.0 * xi * xi * (1.0 - xi) * (1.0 - xi);
    return v0 + (v1 - v0) * xi * xi * (3.0 - 2.0 * xi) + bump * b;
  }
  double slope(double x) const {
    const double xi = (x - x0) / length;
    const double db = 32.0 * xi * (1.0 - xi) * (1.0 - 2.0 * xi);
    return ((v1 - v0) * 6.0 * xi * (1.0 - xi) + bump * db) / length;
  }
};

// (T^2 - t^2)^2 (1 + skew t / T) / T^4 : vanishes with its first derivative
// at t = +-T.
struct TemporalShape {
  double T = 1.0, skew = 0.0;

  double value(double t) const {
    const double q = T * T - t * t;
    return q * q * (1.0 + skew * t / T) / (T * T * T * T);
  }
  double slope(double t) const {
    const double q = T * T - t * t;
    return (-4.0 * t * q * (1.0 + skew * t / T) + q * q * skew / T) / (T * T * T * T);
  }
};

}  // namespace

AnalyticField manufacture_homogeneous_field(const NetworkTopology& topology, double T) {
  // Voltage potential: zero at exterior vertices, deterministic nonzero
  // values at interior ones.
  std::map<int, double> potential;
  for (const auto& [k, x] : topology.coordinates) {
    potential[k] = topology.interior_vertices.count(k) ? 1.0 + 0.25 * std::sin(1.0 + k) : 0.0;
  }

  // Conserved edge-flow endpoint currents: free values at initial nodes,
  // zero at leaf terminals, summed child flows at interior terminals.
  std::map<int, double> flow_init, flow_term;
  for (const Edge& e : topology.edges) {
    flow_init[e.id] = 0.35 + 0.06 * (e.id % 5);
  }
  for (const Edge& e : topology.edges) {
    if (topology.boundary_vertices.count(e.term_vertex)) {
      flow_term[e.id] = 0.0;
    } else {
      double sum = 0.0;
      for (int j : topology.starting(e.term_vertex)) sum += flow_init[j];
      flow_term[e.id] = sum;
    }
  }

  AnalyticField field;
  field.T = T;
  for (const Edge& e : topology.edges) {
    SpatialShape voltage{potential.at(e.init_vertex), potential.at(e.term_vertex),
                         0.4 * std::cos(1.0 + e.id), e.x_init, e.length};
    SpatialShape current{flow_init.at(e.id), flow_term.at(e.id),
                         0.8 + 0.3 * std::sin(2.0 + e.id), e.x_init, e.length};
    TemporalShape psi1{T, 0.3};
    TemporalShape psi2{T, -0.2};

    AnalyticEdgeField f;
    f.u1 = [current, psi1](double x, double t) { return current.value(x) * psi1.value(t); };
    f.u1_x = [current, psi1](double x, double t) { return current.slope(x) * psi1.value(t); };
    f.u1_t = [current, psi1](double x, double t) { return current.value(x) * psi1.slope(t); };
    f.u2 = [voltage, psi2](double x, double t) { return voltage.value(x) * psi2.value(t); };
    f.u2_x = [voltage, psi2](double x, double t) { return voltage.slope(x) * psi2.value(t); };
    f.u2_t = [voltage, psi2](double x, double t) { return voltage.value(x) * psi2.slope(t); };
    field.edges.push_back(std::move(f));
  }
  return field;
}

AnalyticSource analytic_operator(const AnalyticField& field,
                                 const CoefficientProfiles& coefficients) {
  AnalyticSource src;
  for (std::size_t e = 0; e < field.edges.size(); ++e) {
    const AnalyticEdgeField& f = field.edges[e];
    const auto& p = coefficients.edges[e];
    src.f1.push_back([f, p](double x, double t) {
      return p[0](x) * f.u1_t(x, t) + f.u2_x(x, t) + p[2](x) * f.u1(x, t);
    });
    src.f2.push_back([f, p](double x, double t) {
      return f.u1_x(x, t) + p[1](x) * f.u2_t(x, t) + p[3](x) * f.u2(x, t);
    });
  }
  return src;
}

FieldTrajectory sample_field(const AnalyticField& field, const std::vector<EdgeGrid>& grids,
                             const TimeGrid& time) {
  FieldTrajectory traj;
  traj.grids = grids;
  traj.time = time;
  traj.first_level = 0;
  traj.last_level = time.size() - 1;
  traj.u1.resize(grids.size());
  traj.u2.resize(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    traj.u1[e].resize(grids[e].n + 1, time.size());
    traj.u2[e].resize(grids[e].n + 1, time.size());
    for (int m = 0; m < time.size(); ++m) {
      for (Eigen::Index i = 0; i <= grids[e].n; ++i) {
        traj.u1[e](i, m) = field.edges[e].u1(grids[e].x[i], time.times[m]);
        traj.u2[e](i, m) = field.edges[e].u2(grids[e].x[i], time.times[m]);
      }
    }
  }
  return traj;
}

SampledSource sample_source(const AnalyticSource& source, const std::vector<EdgeGrid>& grids,
                            const TimeGrid& time) {
  SampledSource out;
  out.f1.resize(grids.size());
  out.f2.resize(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    out.f1[e].resize(grids[e].n + 1, time.size());
    out.f2[e].resize(grids[e].n + 1, time.size());
    for (int m = 0; m < time.size(); ++m) {
      for (Eigen::Index i = 0; i <= grids[e].n; ++i) {
        out.f1[e](i, m) = source.f1[e](grids[e].x[i], time.times[m]);
        out.f2[e](i, m) = source.f2[e](grids[e].x[i], time.times[m]);
      }
    }
  }
  return out;
}

}  // namespace tgn
