#include "switchctrl/forward.hpp"

#include <cmath>
#include <stdexcept>

namespace swc {

ImplicitStepSolver::ImplicitStepSolver(const SpatialOperators& ops,
                                       double tau) {
  system_ = ops.mass + tau * ops.stiffness;
  llt_.compute(system_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error(
        "ImplicitStepSolver: factorization of M_x + tau*A_x failed");
  }
}

Eigen::VectorXd ImplicitStepSolver::solve(const Eigen::VectorXd& rhs) const {
  return llt_.solve(rhs);
}

namespace {

void check_control(const SpatialOperators& ops, const TimeGrid& grid,
                   const ControlTrajectory& u) {
  if (ops.control_loads.size() != 2) {
    throw std::invalid_argument("solve_forward: expected two control regions");
  }
  if (u.size() != control_size(u.mode, grid.M)) {
    throw std::invalid_argument(
        "solve_forward: control size inconsistent with grid and mode");
  }
  if (!u.all_finite()) {
    throw std::invalid_argument("solve_forward: control has non-finite values");
  }
}

// Value each component feeds into the step t_k -> t_{k+1}.
inline double control_at_step(const ControlTrajectory& u, int i, int k) {
  return u.mode == ControlMode::NodalH1 ? u.values(i, k + 1) : u.values(i, k);
}

}  // namespace

StateTrajectory solve_forward(const ImplicitStepSolver& step,
                              const SpatialOperators& ops, const TimeGrid& grid,
                              const ControlTrajectory& u,
                              const Eigen::VectorXd& y0) {
  check_control(ops, grid, u);
  if (y0.size() != ops.mass.rows()) {
    throw std::invalid_argument("solve_forward: y0 size mismatch");
  }

  StateTrajectory traj;
  traj.y.resize(grid.M);
  traj.y[0] = y0;
  for (int k = 0; k + 1 < grid.M; ++k) {
    Eigen::VectorXd rhs = ops.mass * traj.y[k];
    for (int i = 0; i < 2; ++i) {
      rhs += grid.tau * control_at_step(u, i, k) * ops.control_loads[i];
    }
    traj.y[k + 1] = step.solve(rhs);
  }
  return traj;
}

StateTrajectory solve_forward(const SpatialOperators& ops, const TimeGrid& grid,
                              const ControlTrajectory& u,
                              const Eigen::VectorXd& y0) {
  ImplicitStepSolver step(ops, grid.tau);
  return solve_forward(step, ops, grid, u, y0);
}

double obs_inner(const SpatialOperators& ops, const TimeGrid& grid,
                 const std::vector<Eigen::VectorXd>& a,
                 const std::vector<Eigen::VectorXd>& b) {
  if (a.size() != static_cast<std::size_t>(grid.M) || a.size() != b.size()) {
    throw std::invalid_argument("obs_inner: trajectory length mismatch");
  }
  double s = 0.0;
  for (int k = 0; k < grid.M; ++k) {
    s += grid.weights[k] * a[k].dot(ops.obs_mass * b[k]);
  }
  return s;
}

double obs_norm_sq(const SpatialOperators& ops, const TimeGrid& grid,
                   const std::vector<Eigen::VectorXd>& a) {
  return obs_inner(ops, grid, a, a);
}

double control_inner(const TimeGrid& grid, ControlMode mode,
                     const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b) {
  const Eigen::VectorXd w = control_weights(grid, mode);
  if (a.cols() != w.size() || b.cols() != w.size()) {
    throw std::invalid_argument("control_inner: coefficient size mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    s += (a.row(i).transpose().cwiseProduct(b.row(i).transpose()))
             .dot(w);
  }
  return s;
}

Eigen::Matrix2Xd apply_S0_adjoint(const ImplicitStepSolver& step,
                                  const SpatialOperators& ops,
                                  const TimeGrid& grid, ControlMode mode,
                                  const std::vector<Eigen::VectorXd>& residual) {
  if (residual.size() != static_cast<std::size_t>(grid.M)) {
    throw std::invalid_argument("apply_S0_adjoint: residual length mismatch");
  }
  const int n = static_cast<int>(ops.mass.rows());
  for (const auto& r : residual) {
    if (r.size() != n) {
      throw std::invalid_argument("apply_S0_adjoint: residual size mismatch");
    }
  }

  // Backward sweep: (M_x + tau A_x) p^k = w_k M_obs r^k + M_x p^{k+1}.
  // The pairing of p with the control load vectors yields the exact
  // transpose of the forward map in the weighted coefficient pairing.
  const int nT = control_size(mode, grid.M);
  Eigen::Matrix2Xd out = Eigen::Matrix2Xd::Zero(2, nT);

  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  for (int k = grid.M - 1; k >= 1; --k) {
    Eigen::VectorXd rhs = grid.weights[k] * (ops.obs_mass * residual[k]);
    if (k < grid.M - 1) {
      rhs += ops.mass * p;
    }
    p = step.solve(rhs);
    for (int i = 0; i < 2; ++i) {
      const double pairing = grid.tau * ops.control_loads[i].dot(p);
      if (mode == ControlMode::NodalH1) {
        out(i, k) = pairing / grid.weights[k];
      } else {
        out(i, k - 1) = pairing / grid.tau;
      }
    }
  }
  // H^1 mode: the forward map never reads u(t_0), so its adjoint is zero there.
  return out;
}

Eigen::Matrix2Xd apply_S0_adjoint(const SpatialOperators& ops,
                                  const TimeGrid& grid, ControlMode mode,
                                  const std::vector<Eigen::VectorXd>& residual) {
  ImplicitStepSolver step(ops, grid.tau);
  return apply_S0_adjoint(step, ops, grid, mode, residual);
}

Eigen::VectorXd stack_control(const Eigen::Matrix2Xd& values) {
  const int nT = static_cast<int>(values.cols());
  Eigen::VectorXd z(2 * nT);
  z.head(nT) = values.row(0).transpose();
  z.tail(nT) = values.row(1).transpose();
  return z;
}

Eigen::Matrix2Xd unstack_control(const Eigen::VectorXd& z) {
  const int nT = static_cast<int>(z.size()) / 2;
  Eigen::Matrix2Xd values(2, nT);
  values.row(0) = z.head(nT).transpose();
  values.row(1) = z.tail(nT).transpose();
  return values;
}

GramData assemble_gram(const SpatialOperators& ops, const TimeGrid& grid,
                       ControlMode mode,
                       const std::vector<Eigen::VectorXd>& y_target,
                       const Eigen::VectorXd& y0) {
  const int nT = control_size(mode, grid.M);
  const int dim = 2 * nT;
  const Eigen::VectorXd w = control_weights(grid, mode);
  Eigen::VectorXd w2(dim);
  w2 << w, w;

  ImplicitStepSolver step(ops, grid.tau);

  GramData gram;
  gram.K.resize(dim, dim);

  // One forward/adjoint sweep per unit coefficient; scaling the weighted
  // adjoint by W turns it into the observation-pairing Gram column.
  ControlTrajectory basis = ControlTrajectory::zero(mode, grid.M);
  const Eigen::VectorXd zero_state = Eigen::VectorXd::Zero(ops.mass.rows());
  for (int b = 0; b < dim; ++b) {
    const int comp = b / nT;
    const int idx = b % nT;
    basis.values.setZero();
    basis.values(comp, idx) = 1.0;
    const StateTrajectory resp = solve_forward(step, ops, grid, basis, zero_state);
    const Eigen::Matrix2Xd adj = apply_S0_adjoint(step, ops, grid, mode, resp.y);
    gram.K.col(b) = stack_control(adj).cwiseProduct(w2);
  }

  // Affine part: residual of the uncontrolled solve against the target.
  const StateTrajectory base =
      solve_forward(step, ops, grid, ControlTrajectory::zero(mode, grid.M), y0);
  if (y_target.size() != static_cast<std::size_t>(grid.M)) {
    throw std::invalid_argument("assemble_gram: target length mismatch");
  }
  std::vector<Eigen::VectorXd> res(grid.M);
  for (int k = 0; k < grid.M; ++k) {
    res[k] = base.y[k] - y_target[k];
  }
  gram.affine_term =
      stack_control(apply_S0_adjoint(step, ops, grid, mode, res))
          .cwiseProduct(w2);
  gram.tracking_const = obs_norm_sq(ops, grid, res);

  try {
    gram.norm_S0_sq = estimate_operator_norm(gram.K, w2);
  } catch (const PowerIterationError& e) {
    gram.norm_S0_sq = e.last_estimate;
  }
  return gram;
}

double estimate_operator_norm(const Eigen::MatrixXd& K,
                              const Eigen::VectorXd& weights, double rel_tol,
                              int max_iter) {
  if (K.rows() != K.cols() || K.rows() != weights.size()) {
    throw std::invalid_argument("estimate_operator_norm: size mismatch");
  }
  if ((weights.array() <= 0.0).any()) {
    throw std::invalid_argument("estimate_operator_norm: weights must be positive");
  }

  Eigen::VectorXd v = Eigen::VectorXd::Ones(K.rows());
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd Kv = K * v;
    const double num = v.dot(Kv);
    const double den = v.dot(weights.cwiseProduct(v));
    const double next = num / den;
    if (Kv.norm() == 0.0) {
      return 0.0;
    }
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      return next;
    }
    lambda = next;
    v = Kv.cwiseQuotient(weights);
    v /= std::sqrt(v.dot(weights.cwiseProduct(v)));
  }
  throw PowerIterationError(
      "estimate_operator_norm: power iteration did not converge", lambda);
}

}  // namespace swc
