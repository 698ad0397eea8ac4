#include "telegraphnet/coefficients.hpp"

#include <cmath>

#include "telegraphnet/errors.hpp"

namespace tgn {

CoefficientProfiles constant_coefficients(const NetworkTopology& topology,
                                          const Eigen::Vector4d& p, CoefficientBounds bounds) {
  CoefficientProfiles cp;
  cp.bounds = bounds;
  cp.edges.resize(topology.edges.size());
  for (auto& edge : cp.edges) {
    for (int i = 0; i < 4; ++i) edge[static_cast<std::size_t>(i)] = constant_profile(p[i]);
  }
  return cp;
}

CoefficientField sample_coefficients(const NetworkTopology& topology,
                                     const std::vector<EdgeGrid>& grids,
                                     const CoefficientProfiles& profiles) {
  CoefficientField field;
  field.bounds = profiles.bounds;
  field.p.resize(grids.size());
  for (std::size_t e = 0; e < grids.size(); ++e) {
    for (int i = 0; i < 4; ++i) {
      Eigen::ArrayXd samples(grids[e].x.size());
      for (Eigen::Index k = 0; k < samples.size(); ++k) {
        samples[k] = profiles.eval(static_cast<int>(e), i, grids[e].x[k]);
      }
      field.p[e][static_cast<std::size_t>(i)] = std::move(samples);
    }
  }

  // Restore vertex consistency of L and C by averaging endpoint samples.
  for (int k : topology.interior_vertices) {
    for (int i = 0; i < 2; ++i) {
      double sum = 0.0;
      int count = 0;
      auto endpoint = [&](int j) -> double& {
        const int e = topology.edge_index(j);
        auto& arr = field.p[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)];
        const bool at_term = topology.edges[static_cast<std::size_t>(e)].term_vertex == k;
        return arr[at_term ? arr.size() - 1 : 0];
      };
      for (int j : topology.ending(k)) { sum += endpoint(j); ++count; }
      for (int j : topology.starting(k)) { sum += endpoint(j); ++count; }
      const double mean = sum / count;
      for (int j : topology.ending(k)) {
        double& v = endpoint(j);
        field.consistency_adjustment = std::max(field.consistency_adjustment, std::abs(v - mean));
        v = mean;
      }
      for (int j : topology.starting(k)) {
        double& v = endpoint(j);
        field.consistency_adjustment = std::max(field.consistency_adjustment, std::abs(v - mean));
        v = mean;
      }
    }
  }

  validate_coefficients(topology, grids, field);
  return field;
}

void validate_coefficients(const NetworkTopology& topology, const std::vector<EdgeGrid>& grids,
                           const CoefficientField& field, double consistency_tol) {
  const CoefficientBounds& b = field.bounds;
  for (std::size_t e = 0; e < field.p.size(); ++e) {
    const int id = topology.edges[e].id;
    const auto& p = field.p[e];
    if (p[0].minCoeff() < b.lower1 || p[1].minCoeff() < b.lower2) {
      throw DomainError("edge " + std::to_string(id) +
                        ": inductance/capacitance below the admissible lower bound");
    }
    if (p[2].minCoeff() < 0.0 || p[3].minCoeff() < 0.0) {
      throw DomainError("edge " + std::to_string(id) +
                        ": resistance/conductance must be nonnegative");
    }
    for (int i = 0; i < 4; ++i) {
      if (p[static_cast<std::size_t>(i)].maxCoeff() > b.upper[i]) {
        throw DomainError("edge " + std::to_string(id) + ": component " + std::to_string(i + 1) +
                          " exceeds its upper bound");
      }
    }
  }
  (void)grids;
  // Vertex consistency of L and C.
  for (int k : topology.interior_vertices) {
    for (int i = 0; i < 2; ++i) {
      double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
      auto visit = [&](int j) {
        const int e = topology.edge_index(j);
        const auto& arr = field.p[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)];
        const bool at_term = topology.edges[static_cast<std::size_t>(e)].term_vertex == k;
        const double v = arr[at_term ? arr.size() - 1 : 0];
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      };
      for (int j : topology.ending(k)) visit(j);
      for (int j : topology.starting(k)) visit(j);
      if (vmax - vmin > consistency_tol * std::max(1.0, std::abs(vmax))) {
        throw DomainError("coefficients inconsistent at interior vertex " + std::to_string(k));
      }
    }
  }
}

CoefficientField perturb_coefficients(const NetworkTopology& topology,
                                      const std::vector<EdgeGrid>& grids,
                                      const CoefficientField& base,
                                      const CoefficientProfiles& rho, double eps) {
  CoefficientField out = base;
  for (std::size_t e = 0; e < grids.size(); ++e) {
    for (int i = 0; i < 4; ++i) {
      auto& arr = out.p[e][static_cast<std::size_t>(i)];
      for (Eigen::Index k = 0; k < arr.size(); ++k) {
        arr[k] += eps * rho.eval(static_cast<int>(e), i, grids[e].x[k]);
      }
    }
  }
  validate_coefficients(topology, grids, out);
  return out;
}

}  // namespace tgn
