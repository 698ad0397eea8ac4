#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "telegraphnet/grid.hpp"
#include "telegraphnet/network.hpp"
#include "telegraphnet/problem.hpp"

namespace tgn {

/// Admissibility bounds of the coefficient class: positive lower bounds for
/// inductance and capacitance, upper bounds for all four components.
struct CoefficientBounds {
  double lower1 = 1e-6;  // inductance
  double lower2 = 1e-6;  // capacitance
  Eigen::Vector4d upper{1e6, 1e6, 1e6, 1e6};
};

/// Per-edge analytic coefficient profiles (L, C, R, G), functions of the
/// global coordinate. The solver samples them at grid nodes.
struct CoefficientProfiles {
  std::vector<std::array<Profile, 4>> edges;  // indexed like topology.edges
  CoefficientBounds bounds;

  double eval(int edge_index, int component, double x) const {
    return edges[static_cast<std::size_t>(edge_index)][static_cast<std::size_t>(component)](x);
  }
};

CoefficientProfiles constant_coefficients(const NetworkTopology& topology,
                                          const Eigen::Vector4d& p,
                                          CoefficientBounds bounds = {});

/// Node-sampled coefficients on the edge grids. p[e][i] holds component
/// i in {0:L, 1:C, 2:R, 3:G} at the nodes of edge position e.
class CoefficientField {
 public:
  std::vector<std::array<Eigen::ArrayXd, 4>> p;
  CoefficientBounds bounds;
  /// Largest endpoint adjustment made to restore vertex consistency.
  double consistency_adjustment = 0.0;

  const Eigen::ArrayXd& component(int edge_index, int i) const {
    return p[static_cast<std::size_t>(edge_index)][static_cast<std::size_t>(i)];
  }
  Eigen::ArrayXd wave_speed(int edge_index) const {
    return 1.0 / (component(edge_index, 0) * component(edge_index, 1)).sqrt();
  }
  Eigen::ArrayXd impedance(int edge_index) const {
    return (component(edge_index, 0) / component(edge_index, 1)).sqrt();
  }
};

/// Samples profiles at grid nodes, enforces vertex consistency of L and C
/// by averaging endpoint samples across each interior vertex, and validates
/// the admissibility bounds. Throws DomainError on violation.
CoefficientField sample_coefficients(const NetworkTopology& topology,
                                     const std::vector<EdgeGrid>& grids,
                                     const CoefficientProfiles& profiles);

/// Checks membership in the admissible class; throws DomainError naming the
/// violated bound. Consistency residual beyond tol also throws.
void validate_coefficients(const NetworkTopology& topology, const std::vector<EdgeGrid>& grids,
                           const CoefficientField& field, double consistency_tol = 1e-9);

/// q = p + eps * rho, sampled on the same grids.
CoefficientField perturb_coefficients(const NetworkTopology& topology,
                                      const std::vector<EdgeGrid>& grids,
                                      const CoefficientField& base,
                                      const CoefficientProfiles& rho, double eps);

}  // namespace tgn
