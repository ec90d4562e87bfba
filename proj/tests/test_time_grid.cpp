#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <Eigen/Dense>

#include "switchctrl/time_grid.hpp"

using namespace swc;

TEST_CASE("reference grid: T=10, 101 nodes") {
  const TimeGrid grid = build_time_grid(10.0, 101);
  CHECK(grid.tau == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(grid.weights[0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(grid.weights[50] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(grid.weights.sum() == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(grid.nodes[0] == 0.0);
  CHECK(grid.nodes[100] == 10.0);
}

TEST_CASE("single element grid") {
  const TimeGrid grid = build_time_grid(1.0, 2);
  const Eigen::MatrixXd L = Eigen::MatrixXd(grid.laplacian);
  CHECK(L(0, 0) == doctest::Approx(1.0));
  CHECK(L(0, 1) == doctest::Approx(-1.0));
  CHECK(L(1, 0) == doctest::Approx(-1.0));
  CHECK(L(1, 1) == doctest::Approx(1.0));
  CHECK(grid.weights[0] == doctest::Approx(0.5));
  CHECK(grid.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(build_time_grid(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_time_grid(-1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_time_grid(1.0, 1), std::invalid_argument);
}

TEST_CASE("temporal stiffness reproduces s^2 T for linear functions") {
  const TimeGrid g = build_time_grid(2.0, 7);
  Eigen::VectorXd v(7);
  for (int j = 0; j < 7; ++j) {
    v[j] = 3.0 * g.nodes[j] - 1.0;
  }
  CHECK(v.dot(g.laplacian * v) == doctest::Approx(18.0).epsilon(1e-12));

  const TimeGrid g2 = build_time_grid(5.0, 41);
  Eigen::VectorXd w(41);
  for (int j = 0; j < 41; ++j) {
    w[j] = -0.75 * g2.nodes[j] + 4.0;
  }
  CHECK(w.dot(g2.laplacian * w) ==
        doctest::Approx(0.75 * 0.75 * 5.0).epsilon(1e-12));
}

TEST_CASE("laplacian kernel and positivity") {
  const TimeGrid g = build_time_grid(3.0, 16);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(16);
  CHECK((g.laplacian * ones).cwiseAbs().maxCoeff() <= 1e-13);

  std::mt19937 rng(11);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd v(16);
    for (int j = 0; j < 16; ++j) {
      v[j] = dist(rng);
    }
    CHECK(v.dot(g.laplacian * v) >= -1e-13 * v.squaredNorm());
  }
}

TEST_CASE("lumped weights equal consistent 1D mass row sums") {
  const int M = 23;
  const TimeGrid g = build_time_grid(4.0, M);

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(M, M);
  for (int e = 0; e < M - 1; ++e) {
    mass(e, e) += g.tau / 3.0;
    mass(e + 1, e + 1) += g.tau / 3.0;
    mass(e, e + 1) += g.tau / 6.0;
    mass(e + 1, e) += g.tau / 6.0;
  }
  const Eigen::VectorXd row_sums = mass.rowwise().sum();
  CHECK((row_sums - g.weights).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("control containers follow the discretization mode") {
  const TimeGrid g = build_time_grid(1.0, 9);

  const ControlTrajectory nodal = ControlTrajectory::zero(ControlMode::NodalH1, 9);
  CHECK(nodal.size() == 9);
  CHECK(control_weights(g, ControlMode::NodalH1).size() == 9);

  const ControlTrajectory pc =
      ControlTrajectory::zero(ControlMode::PiecewiseConstant, 9);
  CHECK(pc.size() == 8);
  const Eigen::VectorXd w = control_weights(g, ControlMode::PiecewiseConstant);
  CHECK(w.size() == 8);
  CHECK(w.minCoeff() == doctest::Approx(g.tau));
  CHECK(w.maxCoeff() == doctest::Approx(g.tau));
  CHECK(DualTrajectory::zero(ControlMode::PiecewiseConstant, 9).q.size() == 8);
}
