#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "telegraphnet/least_squares.hpp"
#include "telegraphnet/stability.hpp"

using namespace tgn;

namespace {

const double kLongT = 3.5;  // leaf observations causally cover every edge

CoefficientProfiles base_profiles(const NetworkTopology& topo) {
  return constant_coefficients(topo, {1.0, 1.0, 0.05, 0.02});
}

}  // namespace

TEST_CASE("zero perturbation converges in zero iterations") {
  const NetworkTopology topo = testing::reference_tree();
  const ExperimentPair ex = testing::reference_experiments();
  GridSpec gs;
  gs.cells = 30;
  gs.T = kLongT;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(20);
  const auto meas = synthesize_measurements(topo, base_profiles(topo), zero, ex, gs);
  const LsqResult res = least_squares_reconstruct(topo, base_profiles(topo), ex, meas, gs, {});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.misfit_history[0] <= 1e-18);
}

TEST_CASE("single-edge constant perturbation, noise-free") {
  const NetworkTopology topo = testing::reference_tree();
  const ExperimentPair ex = testing::reference_experiments();
  GridSpec gs;
  gs.cells = 40;
  gs.T = kLongT;
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(20);
  truth[2] = 0.05;  // resistance on the root edge
  const auto meas = synthesize_measurements(topo, base_profiles(topo), truth, ex, gs);
  LsqOptions opt;
  opt.threads = 4;
  const LsqResult res =
      least_squares_reconstruct(topo, base_profiles(topo), ex, meas, gs, opt);
  CHECK(res.converged);
  CHECK(res.iterations <= 20);
  CHECK((res.rho - truth).norm() / truth.norm() < 0.01);
  // Misfit history is recorded and decreasing overall.
  CHECK(res.misfit_history.size() >= 2);
  CHECK(res.misfit_history.back() < res.misfit_history.front());
}

TEST_CASE("degenerate initial data are rejected") {
  const NetworkTopology topo = testing::reference_tree();
  ExperimentPair ex = testing::reference_experiments();
  ex.second = ex.first;  // repeated experiment: determinant condition fails
  GridSpec gs;
  gs.cells = 20;
  gs.T = 1.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(20);
  const auto meas =
      synthesize_measurements(topo, base_profiles(topo), zero, testing::reference_experiments(), gs);
  CHECK_THROWS_AS(least_squares_reconstruct(topo, base_profiles(topo), ex, meas, gs, {}),
                  DomainError);
}

TEST_CASE("trace noise is deterministic for a fixed seed") {
  const NetworkTopology topo = testing::reference_tree();
  const ExperimentPair ex = testing::reference_experiments();
  GridSpec gs;
  gs.cells = 20;
  gs.T = 1.0;
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(20);
  truth[2] = 0.05;
  auto a = synthesize_measurements(topo, base_profiles(topo), truth, ex, gs);
  auto b = a;
  std::mt19937_64 ra(99), rb(99);
  add_trace_noise(a[0], 1e-3, ra);
  add_trace_noise(b[0], 1e-3, rb);
  CHECK(a[0].data_norm == b[0].data_norm);
  for (std::size_t t = 0; t < a[0].traces.size(); ++t) {
    CHECK((a[0].traces[t].u1 - b[0].traces[t].u1).abs().maxCoeff() == 0.0);
  }
  // And it genuinely perturbs the traces.
  CHECK(a[0].data_norm != doctest::Approx(0.0));
}

TEST_CASE("stability table on the reference tree") {
  const NetworkTopology topo = testing::reference_tree();
  const ExperimentPair ex = testing::reference_experiments();
  CoefficientProfiles rho;
  rho.edges.resize(5);
  for (int e = 0; e < 5; ++e) {
    rho.edges[static_cast<std::size_t>(e)] = {constant_profile(0.10), constant_profile(0.05),
                                              gaussian_profile(0.3, 0.5 + 0.6 * e, 0.4),
                                              polynomial_profile({0.1 + 0.02 * e, 0.05})};
  }
  GridSpec gs;
  gs.cells = 60;
  gs.T = 2.0;
  StabilityOptions opt;
  opt.threads = 4;
  const StabilityTable table = stability_experiment(topo, base_profiles(topo), rho,
                                                    {0.0, 0.01, 0.02, 0.05, 0.1}, ex, gs, opt);
  REQUIRE(table.rows.size() == 5);
  CHECK(table.rows[0].flags == "undefined");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(table.rows[i].flags.empty());
    CHECK(table.rows[i].ratio > 0.0);
    lo = std::min(lo, table.rows[i].ratio);
    hi = std::max(hi, table.rows[i].ratio);
  }
  CHECK(hi <= 2.0 * lo);  // ratio stable across the eps grid
  CHECK(table.max_ratio == hi);

  // Linearization: lhs and rhs both scale like eps^2, so rhs(2eps)/rhs(eps)
  // is close to 4.
  CHECK(table.rows[2].rhs / table.rows[1].rhs == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("measurement norm is permutation invariant") {
  const NetworkTopology topo = testing::reference_tree();
  const ExperimentPair ex = testing::reference_experiments();
  GridSpec gs;
  gs.cells = 20;
  gs.T = 1.0;
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(20);
  truth[2] = 0.05;
  auto meas = synthesize_measurements(topo, base_profiles(topo), truth, ex, gs);
  double manual = 0.0;
  auto trapz = [&](const Eigen::ArrayXd& g) {
    return (g.sum() - 0.5 * (g[0] + g[g.size() - 1])) * meas[0].dt;
  };
  // Recompute the norm iterating the traces in reverse order.
  for (auto it = meas[0].traces.rbegin(); it != meas[0].traces.rend(); ++it) {
    manual += trapz(it->d1.square()) + trapz(it->d2.square());
  }
  CHECK(manual == doctest::Approx(meas[0].data_norm).epsilon(1e-13));
}
