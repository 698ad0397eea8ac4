#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "oracle.hpp"
#include "telegraphnet/estimate.hpp"
#include "telegraphnet/solver.hpp"

using namespace tgn;

namespace {

struct Setup {
  NetworkTopology topo;
  std::vector<EdgeGrid> grids;
  CoefficientProfiles prof;
  CoefficientField p;
  TimeGrid time;
  WeightFamily weights;
  AnalyticField field;
  AnalyticSource source;
  FieldTrajectory sampled;
  SampledSource f;
};

Setup make_setup(int cells = 60, double T = 0.8, double beta = 0.9) {
  Setup s{.topo = testing::reference_tree()};
  GridSpec gs;
  gs.cells = cells;
  gs.T = T;
  s.grids = make_edge_grids(s.topo, gs);
  s.prof = constant_coefficients(s.topo, {1, 1, 0, 0});
  s.p = sample_coefficients(s.topo, s.grids, s.prof);
  s.time = make_time_grid(gs, s.grids, s.p);
  s.weights = build_weights(s.topo, 1.0, -1.0, beta, T);
  s.field = manufacture_homogeneous_field(s.topo, T);
  s.source = analytic_operator(s.field, s.prof);
  s.sampled = sample_field(s.field, s.grids, s.time);
  s.f = sample_source(s.source, s.grids, s.time);
  return s;
}

}  // namespace

TEST_CASE("zero field gives zero rows") {
  Setup s = make_setup(20, 0.5);
  for (auto& m : s.sampled.u1) m.setZero();
  for (auto& m : s.sampled.u2) m.setZero();
  for (auto& m : s.f.f1) m.setZero();
  for (auto& m : s.f.f2) m.setZero();
  const CarlemanReport rep =
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, {0.1, 0.3});
  for (const CarlemanRow& row : rep.rows) {
    CHECK(row.lhs_scaled == 0.0);
    CHECK(row.rhs_scaled == 0.0);
    CHECK(row.btilde_scaled == 0.0);
    CHECK(row.ratio == 0.0);
  }
}

TEST_CASE("LHS is exactly quadratic in the field") {
  Setup s = make_setup(40, 0.6);
  const std::vector<double> sg{0.2};
  const CarlemanReport base =
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, sg);
  const double c = 3.0;
  for (auto& m : s.sampled.u1) m *= c;
  for (auto& m : s.sampled.u2) m *= c;
  const CarlemanReport scaled =
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, sg);
  CHECK(scaled.rows[0].lhs_scaled ==
        doctest::Approx(c * c * base.rows[0].lhs_scaled).epsilon(1e-13));
}

TEST_CASE("agrees with the brute-force Simpson oracle") {
  Setup s = make_setup(60, 0.8);
  const std::vector<double> sg = default_s_grid(s.topo, s.weights);
  const CarlemanReport rep =
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, sg);
  for (const CarlemanRow& row : rep.rows) {
    const testing::OracleRow oracle = testing::brute_force_estimate(
        s.topo, s.weights, s.prof, s.field, s.source, row.s, 120, 2 * (s.time.size() - 1));
    CHECK(row.lhs_scaled == doctest::Approx(oracle.lhs_scaled).epsilon(0.01));
    CHECK(row.rhs_scaled == doctest::Approx(oracle.rhs_scaled).epsilon(0.01));
    CHECK(row.btilde_scaled == doctest::Approx(oracle.btilde_scaled).epsilon(0.01));
  }
}

TEST_CASE("ratio stays bounded as s grows") {
  Setup s = make_setup(60, 0.8);
  const std::vector<double> sg = default_s_grid(s.topo, s.weights);
  const CarlemanReport rep =
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, sg);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.rows[3].ratio <= 3.0 * rep.rows[1].ratio);
  // Unscaled LHS (log form) is nondecreasing in s for a fixed field.
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].lhs_log() >= rep.rows[i - 1].lhs_log());
  }
}

TEST_CASE("refuses a sign-indefinite weight family") {
  Setup s = make_setup(30, 2.0);  // T = 2 breaks sign-definiteness for beta = 0.9
  CHECK_THROWS_AS(
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, {0.1}),
      DomainError);
}

TEST_CASE("warns on non-homogeneous side conditions") {
  Setup s = make_setup(30, 0.5);
  for (auto& m : s.sampled.u2) m.array() += 0.1;  // breaks exterior-voltage homogeneity
  const CarlemanReport rep =
      evaluate_estimate(s.topo, s.weights, s.p, s.sampled, s.f.f1, s.f.f2, {0.1});
  CHECK(!rep.warnings.empty());
}
