#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "telegraphnet/solver.hpp"
#include "telegraphnet/weights.hpp"

using namespace tgn;

TEST_CASE("propagation rule at a degree-3 vertex") {
  // Interior vertex at x = 1 fed by an edge with (alpha, xstar) = (1, -1):
  // children get xstar = 0, alpha = 4; weight values and slopes match.
  const NetworkTopology topo =
      build_network({{1, 0, 1, 1.0}, {2, 1, 2, 1.0}, {3, 1, 3, 1.0}}, 0);
  const WeightFamily fam = build_weights(topo, 1.0, -1.0, 0.5, 1.0);

  const int e2 = topo.edge_index(2);
  CHECK(fam.edges[static_cast<std::size_t>(e2)].xstar == doctest::Approx(0.0));
  CHECK(fam.edges[static_cast<std::size_t>(e2)].alpha == doctest::Approx(4.0));

  // phi_i(1) = (1-(-1))^2 = 4 = 4*(1-0)^2 = phi_j(1).
  CHECK(fam.phi(topo.edge_index(1), 1.0, 0.0) == doctest::Approx(4.0));
  CHECK(fam.phi(e2, 1.0, 0.0) == doctest::Approx(4.0));
  // 2 * dphi_i(1) = 2*4 = 8 = dphi_j(1).
  CHECK(2.0 * fam.phi_x(topo.edge_index(1), 1.0) == doctest::Approx(8.0));
  CHECK(fam.phi_x(e2, 1.0) == doctest::Approx(8.0));
}

TEST_CASE("degree-2 vertex passes the weight through unchanged") {
  const NetworkTopology topo = build_network({{1, 0, 1, 1.0}, {2, 1, 2, 1.5}}, 0);
  const WeightFamily fam = build_weights(topo, 2.0, -0.3, 0.0, 1.0);
  CHECK(fam.edges[1].alpha == doctest::Approx(2.0));
  CHECK(fam.edges[1].xstar == doctest::Approx(-0.3));
}

TEST_CASE("single edge keeps the root parameters") {
  const NetworkTopology topo = testing::single_edge();
  const WeightFamily fam = build_weights(topo, 3.0, -2.0, 0.7, 1.2);
  CHECK(fam.edges.size() == 1);
  CHECK(fam.edges[0].alpha == 3.0);
  CHECK(fam.edges[0].xstar == -2.0);
  CHECK(fam.beta == 0.7);
}

TEST_CASE("compatibility residuals on the reference tree") {
  const NetworkTopology topo = testing::reference_tree();
  const WeightFamily fam = build_weights(topo, 1.0, -1.0, 0.9, 1.0);
  const WeightCompatibility c = check_weight_compatibility(topo, fam);
  CHECK(c.max_value_mismatch <= 1e-12);
  CHECK(c.max_slope_mismatch <= 1e-12);
  // xstar lies strictly left of each edge.
  for (std::size_t e = 0; e < 5; ++e) {
    CHECK(fam.edges[e].xstar < topo.edges[e].x_init);
  }
}

namespace {

Assumption1Result a1_single_edge(double beta, double T) {
  const NetworkTopology topo = testing::single_edge();
  GridSpec gs;
  gs.cells = 64;
  gs.T = T;
  const auto grids = make_edge_grids(topo, gs);
  const CoefficientField p =
      sample_coefficients(topo, grids, constant_coefficients(topo, {1, 1, 0, 0}));
  const TimeGrid time = make_time_grid(gs, grids, p);
  const WeightFamily fam = build_weights(topo, 1.0, -1.0, beta, T);
  return check_assumption1(topo, fam, p, grids, time);
}

}  // namespace

TEST_CASE("sign-definiteness: min |D| = 3 on [0,1] x [-1/2,1/2]") {
  const Assumption1Result r = a1_single_edge(1.0, 0.5);
  CHECK(r.pass);
  // |D| = |4 t^2 - 4 (x+1)^2| minimized at x = 0, t = +-T.
  CHECK(r.min_abs == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.x == doctest::Approx(0.0));
  CHECK(std::abs(r.t) == doctest::Approx(0.5));
  CHECK(r.sufficient_condition[0]);
}

TEST_CASE("sign-definiteness fails for T = 2") {
  const Assumption1Result r = a1_single_edge(1.0, 2.0);
  CHECK(!r.pass);  // D vanishes at (x,t) = (0,1) and changes sign over the cylinder
  CHECK(r.min_abs < 0.1);  // the nearest grid point to the zero crossing
}

TEST_CASE("beta = 0 weight is time-independent and passes") {
  const Assumption1Result r = a1_single_edge(0.0, 0.5);
  CHECK(r.pass);
  CHECK(r.min_abs == doctest::Approx(4.0).epsilon(1e-12));  // -4 alpha^2 (x-x*)^2 at x=0
}

TEST_CASE("two-level gap geometry") {
  const NetworkTopology topo = testing::single_edge();
  // phi = (x+1)^2 - beta t^2 on [0,1]: min phi(.,0) = 1, max phi(.,T) = 4 - beta T^2.
  const WeightGap bad = check_weight_gap(topo, build_weights(topo, 1.0, -1.0, 1.0, 1.0));
  CHECK(!bad.ok);
  const WeightGap good = check_weight_gap(topo, build_weights(topo, 1.0, -1.0, 3.5, 1.0));
  CHECK(good.ok);
  CHECK(good.d1 == doctest::Approx(1.0));
  CHECK(good.boundary_max == doctest::Approx(0.5));
}

TEST_CASE("parameter preconditions") {
  const NetworkTopology topo = testing::single_edge();
  CHECK_THROWS_AS(build_weights(topo, 0.0, -1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_weights(topo, 1.0, 0.5, 1.0, 1.0), DomainError);  // xstar inside edge
  CHECK_THROWS_AS(build_weights(topo, 1.0, -1.0, -0.1, 1.0), DomainError);
}
