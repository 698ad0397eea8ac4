#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "telegraphnet/trajectory.hpp"
#include "telegraphnet/weights.hpp"

namespace tgn {

/// One row of the weighted-inequality evaluation at a fixed s. To keep the
/// exponentials in range every integral carries the common factor
/// exp(log_offset) with log_offset = 2 s max(phi); the *_scaled members are
/// the remaining finite parts and the ratio is offset-invariant.
struct CarlemanRow {
  double s = 0.0;
  double lhs_scaled = 0.0;       // s^2 sum_j int |u|^2 e^{2s(phi-phi_max)}
  double rhs_scaled = 0.0;       // sum_j int |f|^2 e^{2s(phi-phi_max)}
  double btilde_scaled = 0.0;    // boundary term, s included
  double log_offset = 0.0;
  double ratio = 0.0;            // lhs / (rhs + btilde)

  double lhs_log() const;
  double rhs_log() const;
  double btilde_log() const;
};

struct CarlemanReport {
  std::vector<CarlemanRow> rows;
  double c_hat = 0.0;  // max ratio over the s grid
  double phi_max = 0.0;
  std::vector<std::string> warnings;
};

/// Evaluates both sides of the weighted estimate on a sampled field with its
/// source by trapezoidal quadrature. Refuses (DomainError) if the weight
/// family fails the sign-definiteness assumption for the given coefficients;
/// warns if the field violates the homogeneous side conditions beyond tol.
CarlemanReport evaluate_estimate(const NetworkTopology& topology, const WeightFamily& weights,
                                 const CoefficientField& coefficients,
                                 const FieldTrajectory& field,
                                 const std::vector<Eigen::MatrixXd>& f1,
                                 const std::vector<Eigen::MatrixXd>& f2,
                                 const std::vector<double>& s_values,
                                 double homogeneity_tol = 1e-8);

/// Default s grid {5, 10, 20, 40} scaled by 1/max|phi|.
std::vector<double> default_s_grid(const NetworkTopology& topology, const WeightFamily& weights);

}  // namespace tgn
