#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "switchctrl/config.hpp"
#include "switchctrl/ssn.hpp"

using namespace swc;

namespace {

ProblemConfig small_config(double eps = 1e-4, double amp1 = 2.0,
                           double amp2 = 1.0) {
  ProblemConfig c = example2_preset();
  c.nx = 4;
  c.M = 11;
  c.eps = eps;
  c.target.amp1 = amp1;
  c.target.amp2 = amp2;
  return c;
}

ObjectiveParams params_for(const ProblemConfig& c, double beta, double gamma) {
  ObjectiveParams p;
  p.alpha = c.alpha;
  p.eps = c.eps;
  p.beta = beta;
  p.gamma = gamma;
  return p;
}

ControlTrajectory random_control(const Discretization& disc, unsigned seed,
                                 double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < u.size(); ++j) {
      u.values(i, j) = dist(rng);
    }
  }
  return u;
}

// Warm-started continuation in gamma at fixed beta, mirroring phase 1.
SsnResult warm_up(const Discretization& disc, const ProblemConfig& c,
                  double beta, double gamma_max, const SsnOptions& opts) {
  ObjectiveParams p = params_for(c, beta, 0.0);
  SsnResult state;
  state.u = init_solve(disc, p);
  state.q = DualTrajectory::zero(disc.mode, disc.grid.M);
  for (double gamma = 1e-9; gamma <= gamma_max * 1.0000001; gamma *= 10.0) {
    p.gamma = std::min(gamma, gamma_max);
    state = ssn_solve(disc, state.u, state.q, p, opts);
  }
  return state;
}

}  // namespace

TEST_CASE("residual at the origin is the affine gradient") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);

  const ResidualVector r = residual(disc, u, q, params_for(c, 0.5, 2.0));
  CHECK((stack_control(r.F1) - disc.gram.affine_term).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(r.F2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("with q = 0 the complementarity residual is gamma u1 u2") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u = random_control(disc, 42);
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  const double gamma = 3.5;
  const ResidualVector r = residual(disc, u, q, params_for(c, 1.0, gamma));
  for (int j = 0; j < u.size(); ++j) {
    CHECK(r.F2[j] ==
          doctest::Approx(gamma * u.values(0, j) * u.values(1, j)).epsilon(1e-15));
  }
}

TEST_CASE("one paper-variant step from near zero solves the smooth problem") {
  // With beta large every node is inactive; under the paper's printed
  // derivative selection the dual block is invertible and the step decouples
  // into the smooth normal equations.
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ObjectiveParams p = params_for(c, 1e6, 1e-6);

  Eigen::MatrixXd H = disc.gram.K;
  const int nT = disc.control_dim();
  for (int j = 0; j < nT; ++j) {
    H(j, j) += p.alpha * disc.weights[j];
    H(nT + j, nT + j) += p.alpha * disc.weights[j];
  }
  const Eigen::MatrixXd L = Eigen::MatrixXd(disc.grid.laplacian);
  H.topLeftCorner(nT, nT) += p.eps * L;
  H.bottomRightCorner(nT, nT) += p.eps * L;
  const Eigen::VectorXd u_star =
      Eigen::LDLT<Eigen::MatrixXd>(H).solve(-disc.gram.affine_term);

  const ControlTrajectory u0 = random_control(disc, 21, 1e-8);
  const DualTrajectory q0 = DualTrajectory::zero(disc.mode, disc.grid.M);
  const NewtonStep step =
      newton_step(disc, u0, q0, p, NewtonDerivative::PaperVariant);
  const Eigen::VectorXd u1 = stack_control(u0.values + step.du);
  CHECK((u1 - u_star).cwiseAbs().maxCoeff() <=
        1e-10 * (1.0 + u_star.cwiseAbs().maxCoeff()));
}

TEST_CASE("component swap symmetry is preserved by the step") {
  // Identical control regions make the two components interchangeable.
  ProblemConfig c = small_config();
  c.control_regions = {Region::half_plane(0, Region::Cmp::Leq, 0.0, "omega"),
                       Region::half_plane(0, Region::Cmp::Leq, 0.0, "omega")};
  const Discretization disc = build_discretization(c);

  ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int j = 0; j < u.size(); ++j) {
    u.values(0, j) = dist(rng);
    u.values(1, j) = u.values(0, j);
  }
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  const NewtonStep step = newton_step(disc, u, q, params_for(c, 0.5, 1.0));
  const double scale = step.du.cwiseAbs().maxCoeff();
  CHECK((step.du.row(0) - step.du.row(1)).cwiseAbs().maxCoeff() <=
        1e-10 * std::max(scale, 1e-30));
}

TEST_CASE("all-active step matches the block elimination oracle") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const double beta = 0.5;
  const double gamma = 2.5;
  const ObjectiveParams p = params_for(c, beta, gamma);
  const int nT = disc.control_dim();

  const ControlTrajectory u = random_control(disc, 314);
  DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> dist(1.0, 3.0);
  for (int j = 0; j < nT; ++j) {
    q.q[j] = (j % 2 == 0 ? 1.0 : -1.0) * (beta + dist(rng));
  }

  const NewtonStep step = newton_step(disc, u, q, p);
  for (int j = 0; j < nT; ++j) {
    CHECK((step.pattern.upper[j] || step.pattern.lower[j]));
  }

  // Eliminate dq = F2 + gamma (u2 du1 + u1 du2) and solve the reduced system
  // assembled from first principles.
  const Eigen::VectorXd u1 = u.values.row(0).transpose();
  const Eigen::VectorXd u2 = u.values.row(1).transpose();
  Eigen::MatrixXd H = disc.gram.K;
  const Eigen::MatrixXd L = Eigen::MatrixXd(disc.grid.laplacian);
  H.topLeftCorner(nT, nT) += p.eps * L;
  H.bottomRightCorner(nT, nT) += p.eps * L;
  for (int j = 0; j < nT; ++j) {
    H(j, j) += p.alpha * disc.weights[j];
    H(nT + j, nT + j) += p.alpha * disc.weights[j];
    H(j, nT + j) += disc.weights[j] * q.q[j];
    H(nT + j, j) += disc.weights[j] * q.q[j];
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * nT, nT);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nT, 2 * nT);
  for (int j = 0; j < nT; ++j) {
    C(j, j) = disc.weights[j] * u2[j];
    C(nT + j, j) = disc.weights[j] * u1[j];
    D(j, j) = gamma * u2[j];
    D(j, nT + j) = gamma * u1[j];
  }
  const ResidualVector r = residual(disc, u, q, p);
  const Eigen::MatrixXd reduced = H + C * D;
  const Eigen::VectorXd rhs = -stack_control(r.F1) - C * r.F2;
  const Eigen::VectorXd du_ref = reduced.partialPivLu().solve(rhs);
  const Eigen::VectorXd dq_ref = r.F2 + D * du_ref;

  CHECK((stack_control(step.du) - du_ref).cwiseAbs().maxCoeff() <=
        1e-11 * (1.0 + du_ref.cwiseAbs().maxCoeff()));
  CHECK((step.dq - dq_ref).cwiseAbs().maxCoeff() <=
        1e-11 * (1.0 + dq_ref.cwiseAbs().maxCoeff()));
}

TEST_CASE("singular Newton matrix raises with the active pattern") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  // All nodes inactive and u = 0: the complementarity rows vanish entirely.
  try {
    newton_step(disc, u, q, params_for(c, 1.0, 1.0));
    FAIL("expected SingularNewtonError");
  } catch (const SingularNewtonError& e) {
    CHECK(e.pattern.count_upper() == 0);
    CHECK(e.pattern.count_lower() == 0);
  }
}

TEST_CASE("gamma must be positive for Newton steps") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  CHECK_THROWS_AS(newton_step(disc, u, q, params_for(c, 1.0, 0.0)),
                  std::invalid_argument);
  SsnOptions opts;
  CHECK_THROWS_AS(ssn_solve(disc, u, q, params_for(c, 1.0, 0.0), opts),
                  std::invalid_argument);
}

TEST_CASE("newton matrix (1,1) block is symmetric when inactive") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u = random_control(disc, 77);
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  const Eigen::MatrixXd J = assemble_newton_matrix(
      disc, u, q, params_for(c, 10.0, 1.0), NewtonDerivative::Standard);
  const int nT = disc.control_dim();
  const Eigen::MatrixXd B = J.topLeftCorner(2 * nT, 2 * nT);
  CHECK((B - B.transpose()).cwiseAbs().maxCoeff() <=
        1e-12 * B.cwiseAbs().maxCoeff());
}

TEST_CASE("ssn at a converged point performs no iterations") {
  ProblemConfig c = small_config();
  c.target.kind = TargetSpec::Kind::Zero;
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  const DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  SsnOptions opts;
  const SsnResult res = ssn_solve(disc, u, q, params_for(c, 1e-5, 1e-9), opts);
  CHECK(res.report.iterations == 0);
  CHECK(res.report.converged);
  CHECK(res.report.residual_norms.size() == 1);
}

TEST_CASE("max_iter = 0 returns the initial iterate") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u0 = random_control(disc, 15);
  const DualTrajectory q0 = DualTrajectory::zero(disc.mode, disc.grid.M);
  SsnOptions opts;
  opts.max_iter = 0;
  const SsnResult res = ssn_solve(disc, u0, q0, params_for(c, 0.5, 1.0), opts);
  CHECK(res.report.iterations == 0);
  CHECK(!res.report.converged);
  CHECK((res.u.values - u0.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("residual history decays superlinearly at (beta, gamma) = (0.1, 100)") {
  ProblemConfig c = small_config(1e-5, 20.0, 10.0);
  c.nx = 6;
  c.M = 31;
  const Discretization disc = build_discretization(c);
  SsnOptions opts;
  opts.max_iter = 8;

  SsnResult state = warm_up(disc, c, 1e-5, 1e2, opts);
  ObjectiveParams p = params_for(c, 1e-5, 1e2);
  for (const double beta : {1e-4, 1e-3, 1e-2, 1e-1}) {
    p.beta = beta;
    state = ssn_solve(disc, state.u, state.q, p, opts);
  }
  const auto& norms = state.report.residual_norms;
  CHECK(state.report.converged);
  REQUIRE(norms.size() >= 2);
  for (std::size_t k = 1; k < norms.size(); ++k) {
    CHECK(norms[k] < norms[k - 1]);
  }
  CHECK(norms.back() / norms[norms.size() - 2] < 0.1);
}

TEST_CASE("converged iterates satisfy the regularized complementarity") {
  const ProblemConfig c = small_config(1e-4, 2.0, 1.0);
  const Discretization disc = build_discretization(c);
  SsnOptions opts;
  const double gamma = 1e2;
  const SsnResult state = warm_up(disc, c, 1e-3, gamma, opts);
  REQUIRE(state.report.converged);

  const double u_inf = state.u.values.cwiseAbs().maxCoeff();
  for (int j = 0; j < state.u.size(); ++j) {
    const double resolvent =
        (std::max(0.0, state.q.q[j] - 1e-3) + std::min(0.0, state.q.q[j] + 1e-3)) /
        gamma;
    const double gap =
        std::abs(state.u.values(0, j) * state.u.values(1, j) - resolvent);
    CHECK(gap <= 1e-8 * (1.0 + u_inf * u_inf));
  }
}

TEST_CASE("stationarity cross-check at a converged point") {
  const ProblemConfig c = small_config(1e-4, 2.0, 1.0);
  const Discretization disc = build_discretization(c);
  SsnOptions opts;
  const double beta = 1e-3;
  const SsnResult state = warm_up(disc, c, beta, 1e2, opts);
  REQUIRE(state.report.converged);

  ObjectiveParams smooth = params_for(c, beta, 0.0);
  Eigen::VectorXd g = grad_smooth(disc, state.u, smooth);
  const int nT = disc.control_dim();
  const Eigen::VectorXd wq = disc.weights.cwiseProduct(state.q.q);
  g.head(nT) += wq.cwiseProduct(state.u.values.row(1).transpose());
  g.tail(nT) += wq.cwiseProduct(state.u.values.row(0).transpose());
  CHECK(g.norm() <= opts.abs_tol * (1.0 + state.u.values.cwiseAbs().maxCoeff()));
}

TEST_CASE("identical inputs give bitwise identical runs") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const ControlTrajectory u0 = random_control(disc, 55);
  const DualTrajectory q0 = DualTrajectory::zero(disc.mode, disc.grid.M);
  SsnOptions opts;
  const SsnResult a = ssn_solve(disc, u0, q0, params_for(c, 0.5, 1.0), opts);
  const SsnResult b = ssn_solve(disc, u0, q0, params_for(c, 0.5, 1.0), opts);
  REQUIRE(a.report.residual_norms.size() == b.report.residual_norms.size());
  for (std::size_t k = 0; k < a.report.residual_norms.size(); ++k) {
    CHECK(a.report.residual_norms[k] == b.report.residual_norms[k]);
  }
  CHECK((a.u.values - b.u.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.q.q - b.q.q).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("init_solve solves the smooth quadratic problem") {
  SUBCASE("zero problem returns zero") {
    ProblemConfig c = small_config();
    c.target.kind = TargetSpec::Kind::Zero;
    const Discretization disc = build_discretization(c);
    const ControlTrajectory u = init_solve(disc, params_for(c, 0.0, 0.0));
    CHECK(u.values.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("gradient vanishes at the minimizer") {
    const ProblemConfig c = small_config();
    const Discretization disc = build_discretization(c);
    const ControlTrajectory u = init_solve(disc, params_for(c, 0.0, 0.0));
    const Eigen::VectorXd g = grad_smooth(disc, u, params_for(c, 0.0, 0.0));
    CHECK(g.norm() <= 1e-10 * std::max(disc.gram.affine_term.norm(), 1e-30));
  }

  SUBCASE("control norm decreases with alpha") {
    ProblemConfig c = small_config();
    double previous = std::numeric_limits<double>::infinity();
    const Discretization disc = build_discretization(c);
    for (const double alpha : {1.0, 10.0, 100.0}) {
      ObjectiveParams p = params_for(c, 0.0, 0.0);
      p.alpha = alpha;
      const ControlTrajectory u = init_solve(disc, p);
      const double norm = stack_control(u.values).norm();
      CHECK(norm < previous);
      previous = norm;
    }
  }
}
