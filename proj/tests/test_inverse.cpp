#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "telegraphnet/inverse.hpp"
#include "telegraphnet/solver.hpp"

using namespace tgn;

namespace {

Eigen::ArrayXd linspace(double a, double b, int n) {
  return Eigen::ArrayXd::LinSpaced(n, a, b);
}

CoefficientProfiles smooth_perturbation(int edge_count) {
  // rho1, rho2 constant across the tree (vertex consistency of L and C);
  // rho3, rho4 vary freely per edge.
  CoefficientProfiles rho;
  rho.edges.resize(static_cast<std::size_t>(edge_count));
  for (int e = 0; e < edge_count; ++e) {
    auto& q = rho.edges[static_cast<std::size_t>(e)];
    q[0] = constant_profile(0.10);
    q[1] = constant_profile(0.05);
    q[2] = gaussian_profile(0.3, 0.5 + 0.6 * e, 0.4);
    q[3] = polynomial_profile({0.1 + 0.02 * e, 0.05});
  }
  return rho;
}

}  // namespace

TEST_CASE("determinant condition: worked examples") {
  // z1 = (1, x), z2 = (x, 1): det = (x)(-x) = -x^2.
  const Profile one = constant_profile(1.0);
  const Profile ident = polynomial_profile({0.0, 1.0});

  SUBCASE("min |det| = 1 on [1, 2]") {
    const Assumption2Result r =
        assumption2_on_interval(linspace(1.0, 2.0, 101), one, ident, ident, one);
    CHECK(r.pass);
    CHECK(r.min_abs_det == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.x == doctest::Approx(1.0));
  }
  SUBCASE("repeated experiment is degenerate") {
    const Assumption2Result r =
        assumption2_on_interval(linspace(1.0, 2.0, 101), one, ident, one, ident);
    CHECK(!r.pass);
    CHECK(r.min_abs_det == doctest::Approx(0.0));
  }
  SUBCASE("edge containing x = 0 fails") {
    const Assumption2Result r =
        assumption2_on_interval(linspace(-1.0, 1.0, 101), one, ident, ident, one);
    CHECK(!r.pass);
    CHECK(std::abs(r.x) < 1e-12);
  }
}

TEST_CASE("determinant equals the product of the 2x2 blocks") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a0 = U(rng), a1 = U(rng), b0 = U(rng), b1 = U(rng);
    const double c0 = U(rng), c1 = U(rng), d0 = U(rng), d1 = U(rng);
    const Profile z11 = polynomial_profile({a0, a1}), z12 = polynomial_profile({b0, b1});
    const Profile z21 = polynomial_profile({c0, c1}), z22 = polynomial_profile({d0, d1});
    const double x = U(rng);

    // Assemble the full 4x4 system matrix in the unknown order
    // (rho1, rho2, rho3, rho4) and compare determinants.
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    const Profile* zc[2] = {&z11, &z21};
    const Profile* zv[2] = {&z12, &z22};
    for (int e = 0; e < 2; ++e) {
      m(2 * e, 0) = zv[e]->df(x);
      m(2 * e, 2) = zc[e]->f(x);
      m(2 * e + 1, 1) = zc[e]->df(x);
      m(2 * e + 1, 3) = zv[e]->f(x);
    }
    const double block_a = zv[0]->df(x) * zc[1]->f(x) - zv[1]->df(x) * zc[0]->f(x);
    const double block_b = zc[0]->df(x) * zv[1]->f(x) - zc[1]->df(x) * zv[0]->f(x);
    CHECK(std::abs(m.determinant() - block_a * block_b) < 1e-10);

    Eigen::ArrayXd single(1);
    single[0] = x;
    const Assumption2Result r = assumption2_on_interval(single, z11, z12, z21, z22);
    CHECK(std::abs(r.min_abs_det - std::abs(block_a * block_b)) < 1e-12);
  }
}

TEST_CASE("reference experiments pass the network-wide check") {
  const NetworkTopology topo = testing::reference_tree();
  GridSpec gs;
  gs.cells = 50;
  gs.T = 0.5;
  const auto grids = make_edge_grids(topo, gs);
  const Assumption2Result r = check_assumption2(topo, grids, testing::reference_experiments());
  CHECK(r.pass);
  CHECK(r.min_abs_det > 0.1);
}

namespace {

struct SimPair {
  NetworkTopology topo = testing::reference_tree();
  ExperimentPair ex = testing::reference_experiments();
  std::vector<EdgeGrid> grids;
  CoefficientField p, q;
  TimeGrid time;
  std::array<FieldTrajectory, 2> u, v;

  SimPair(int cells, double T, const CoefficientProfiles& rho, double eps) {
    GridSpec gs;
    gs.cells = cells;
    gs.T = T;
    grids = make_edge_grids(topo, gs);
    p = sample_coefficients(topo, grids, constant_coefficients(topo, {1.0, 1.0, 0.05, 0.02}));
    time = make_time_grid(gs, grids, p);
    q = perturb_coefficients(topo, grids, p, rho, eps);
    for (int m = 0; m < 2; ++m) {
      u[static_cast<std::size_t>(m)] = solve(topo, p, ex.get(m), grids, time, SolveDirection::Both);
      v[static_cast<std::size_t>(m)] = solve(topo, q, ex.get(m), grids, time, SolveDirection::Both);
    }
  }
};

}  // namespace

TEST_CASE("difference field basics") {
  const CoefficientProfiles rho = smooth_perturbation(5);
  SimPair sim(40, 0.4, rho, 0.05);

  SUBCASE("zero perturbation gives zero w and zero source") {
    const DifferenceField d =
        difference_field(sim.u[0], sim.u[0], sim.p, sim.p, true);
    for (std::size_t e = 0; e < 5; ++e) {
      CHECK(d.w.u1[e].cwiseAbs().maxCoeff() == 0.0);
      CHECK(d.f1[e].cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(d.residual == 0.0);
  }

  SUBCASE("shared initial data: w(., 0) = 0") {
    const DifferenceField d = difference_field(sim.u[0], sim.v[0], sim.p, sim.q);
    const int i0 = d.w.time.index0();
    for (std::size_t e = 0; e < 5; ++e) {
      CHECK(d.w.u1[e].col(i0).cwiseAbs().maxCoeff() == 0.0);
      CHECK(d.w.u2[e].col(i0).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("single-component perturbation localizes the source") {
    CoefficientField q1 = sim.p;
    q1.p[0][0] += 0.07;  // rho1 constant on the first edge only
    const FieldTrajectory v =
        solve(sim.topo, q1, sim.ex.get(0), sim.grids, sim.time, SolveDirection::Both);
    const DifferenceField d = difference_field(sim.u[0], v, sim.p, q1);
    CHECK(d.f1[0].cwiseAbs().maxCoeff() > 1e-4);
    for (std::size_t e = 1; e < 5; ++e) {
      CHECK(d.f1[e].cwiseAbs().maxCoeff() == 0.0);
      CHECK(d.f2[e].cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("algebraic round trip recovers random admissible rho") {
  const NetworkTopology topo = testing::reference_tree();
  const ExperimentPair ex = testing::reference_experiments();
  GridSpec gs;
  gs.cells = 30;
  gs.T = 0.4;
  const auto grids = make_edge_grids(topo, gs);
  const CoefficientField p =
      sample_coefficients(topo, grids, constant_coefficients(topo, {1.0, 1.0, 0.05, 0.02}));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-0.04, 0.04);
  std::uniform_real_distribution<double> P(0.001, 0.04);  // keeps q3, q4 nonnegative
  for (int trial = 0; trial < 5; ++trial) {
    CoefficientProfiles rho;
    rho.edges.resize(5);
    const double r1 = U(rng), r2 = U(rng);
    for (int e = 0; e < 5; ++e) {
      rho.edges[static_cast<std::size_t>(e)] = {constant_profile(r1), constant_profile(r2),
                                                polynomial_profile({P(rng), P(rng)}),
                                                gaussian_profile(P(rng), 1.5, 0.8)};
    }
    const CoefficientField q = perturb_coefficients(topo, grids, p, rho, 1.0);
    const SampledPerturbation truth = sample_perturbation(grids, rho, 1.0);
    const TimeDerivativeData data = algebraic_forward_map(topo, grids, ex, p, q, truth);
    const DirectReconstruction rec = direct_reconstruct_t0(topo, grids, data, ex, q, p);
    CHECK(rec.flagged_points == 0);
    CHECK(perturbation_relative_error(grids, rec.rho, truth) < 1e-12);
  }
}

TEST_CASE("full-simulation reconstruction converges under refinement") {
  const CoefficientProfiles rho = smooth_perturbation(5);
  double prev = 0.0;
  for (int cells : {50, 100}) {
    SimPair sim(cells, 0.5, rho, 0.05);
    std::array<FieldTrajectory, 2> w;
    for (int m = 0; m < 2; ++m) {
      w[static_cast<std::size_t>(m)] = difference_field(sim.u[static_cast<std::size_t>(m)],
                                                        sim.v[static_cast<std::size_t>(m)],
                                                        sim.p, sim.q)
                                           .w;
    }
    const TimeDerivativeData data = time_derivative_from_simulation(w[0], w[1]);
    const DirectReconstruction rec =
        direct_reconstruct_t0(sim.topo, sim.grids, data, sim.ex, sim.q, sim.p);
    const SampledPerturbation truth = sample_perturbation(sim.grids, rho, 0.05);
    const double err = perturbation_relative_error(sim.grids, rec.rho, truth);
    CHECK(err < 1e-3);
    if (prev > 0.0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("time derivative extraction needs levels around zero") {
  const CoefficientProfiles rho = smooth_perturbation(5);
  SimPair sim(20, 0.3, rho, 0.05);
  FieldTrajectory forward_only = sim.u[0];
  forward_only.first_level = forward_only.time.index0();  // discard t < 0
  CHECK_THROWS_AS(time_derivative_from_simulation(forward_only, sim.u[1]), ConfigError);
}
