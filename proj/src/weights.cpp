#include "telegraphnet/weights.hpp"

#include <cmath>
#include <deque>

#include "telegraphnet/errors.hpp"

namespace tgn {

double WeightFamily::max_phi(const NetworkTopology& topology) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = topology.edges[e];
    m = std::max(m, phi(static_cast<int>(e), edge.x_term, 0.0));
  }
  return m;
}

WeightFamily build_weights(const NetworkTopology& topology, double root_alpha,
                           double root_xstar, double beta, double T) {
  if (!(root_alpha > 0.0)) throw DomainError("root alpha must be positive");
  if (beta < 0.0) throw DomainError("beta must be nonnegative");
  const int root_edge = *topology.starting(topology.root).begin();
  if (!(root_xstar < topology.edge(root_edge).x_init)) {
    throw DomainError("root xstar must lie strictly left of the root edge");
  }

  WeightFamily fam;
  fam.beta = beta;
  fam.T = T;
  fam.edges.resize(topology.edges.size());

  fam.edges[static_cast<std::size_t>(topology.edge_index(root_edge))] = {root_alpha, root_xstar};

  std::deque<int> queue{topology.edge(root_edge).term_vertex};
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    if (topology.boundary_vertices.count(k)) continue;
    const int incoming = *topology.ending(k).begin();
    const auto& wi = fam.edges[static_cast<std::size_t>(topology.edge_index(incoming))];
    const double xk = topology.coordinates.at(k);
    const double d = static_cast<double>(topology.starting(k).size());
    for (int j : topology.starting(k)) {
      auto& wj = fam.edges[static_cast<std::size_t>(topology.edge_index(j))];
      wj.xstar = ((d - 1.0) * xk + wi.xstar) / d;
      wj.alpha = d * d * wi.alpha;
      queue.push_back(topology.edge(j).term_vertex);
    }
  }
  return fam;
}

WeightCompatibility check_weight_compatibility(const NetworkTopology& topology,
                                               const WeightFamily& weights) {
  WeightCompatibility out;
  for (int k : topology.interior_vertices) {
    const double xk = topology.coordinates.at(k);
    const double d = static_cast<double>(topology.starting(k).size());
    const int i = *topology.ending(k).begin();
    const int ei = topology.edge_index(i);
    const double phi_i = weights.phi(ei, xk, 0.0);
    const double slope_i = weights.phi_x(ei, xk);
    for (int j : topology.starting(k)) {
      const int ej = topology.edge_index(j);
      const double phi_j = weights.phi(ej, xk, 0.0);
      const double slope_j = weights.phi_x(ej, xk);
      const double scale_v = std::max({1.0, std::abs(phi_i), std::abs(phi_j)});
      const double scale_s = std::max({1.0, std::abs(slope_j)});
      out.max_value_mismatch =
          std::max(out.max_value_mismatch, std::abs(phi_i - phi_j) / scale_v);
      out.max_slope_mismatch =
          std::max(out.max_slope_mismatch, std::abs(d * slope_i - slope_j) / scale_s);
    }
  }
  return out;
}

Assumption1Result check_assumption1(const NetworkTopology& topology, const WeightFamily& weights,
                                    const CoefficientField& coefficients,
                                    const std::vector<EdgeGrid>& grids, const TimeGrid& time) {
  Assumption1Result res;
  res.min_abs = std::numeric_limits<double>::infinity();
  bool any_pos = false, any_neg = false;

  for (std::size_t e = 0; e < grids.size(); ++e) {
    const Eigen::ArrayXd& x = grids[e].x;
    const auto& p = coefficients.p[e];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double px = weights.phi_x(static_cast<int>(e), x[i]);
      for (int m = 0; m < time.size(); ++m) {
        const double pt = weights.phi_t(time.times[m]);
        const double d = p[0][i] * p[1][i] * pt * pt - px * px;
        (d > 0.0 ? any_pos : any_neg) = true;
        if (std::abs(d) < res.min_abs) {
          res.min_abs = std::abs(d);
          res.edge_id = topology.edges[e].id;
          res.x = x[i];
          res.t = time.times[m];
        }
      }
    }
    // Sufficient condition for the all-negative case.
    const double p1p2_max = (p[0] * p[1]).maxCoeff();
    const Edge& edge = topology.edges[e];
    const auto& w = weights.edges[e];
    res.sufficient_condition.push_back(std::sqrt(p1p2_max) * weights.beta * weights.T <
                                       w.alpha * (edge.x_init - w.xstar));
  }
  res.pass = res.min_abs > 0.0 && !(any_pos && any_neg);
  return res;
}

WeightGap check_weight_gap(const NetworkTopology& topology, const WeightFamily& weights) {
  WeightGap gap;
  gap.d1 = std::numeric_limits<double>::infinity();
  gap.boundary_max = -gap.d1;
  for (std::size_t e = 0; e < weights.edges.size(); ++e) {
    const Edge& edge = topology.edges[e];
    // phi(x, 0) is increasing in x on the edge (x > xstar).
    gap.d1 = std::min(gap.d1, weights.phi(static_cast<int>(e), edge.x_init, 0.0));
    gap.boundary_max =
        std::max(gap.boundary_max, weights.phi(static_cast<int>(e), edge.x_term, weights.T));
  }
  gap.ok = gap.d1 > gap.boundary_max;
  return gap;
}

}  // namespace tgn
