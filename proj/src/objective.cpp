#include "switchctrl/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swc {

void validate_params(const ObjectiveParams& params, ControlMode mode) {
  if (!(params.alpha > 0.0)) {
    throw std::invalid_argument("objective: alpha must be positive");
  }
  if (params.beta < 0.0 || params.eps < 0.0 || params.gamma < 0.0) {
    throw std::invalid_argument("objective: beta, eps, gamma must be >= 0");
  }
  if (params.eps == 0.0 && mode == ControlMode::NodalH1) {
    throw std::invalid_argument(
        "objective: eps = 0 is only admissible for piecewise-constant controls");
  }
}

namespace {

void check_u(const Discretization& disc, const ControlTrajectory& u) {
  if (u.mode != disc.mode || u.size() != disc.control_dim()) {
    throw std::invalid_argument("objective: control inconsistent with problem");
  }
}

// Shared smooth terms: alpha/2 ||u||_w^2 + eps/2 |u_t|^2 + gamma/2 ||u1 u2||_w^2.
double regularizer_terms(const Discretization& disc, const ControlTrajectory& u,
                         const ObjectiveParams& params) {
  const auto u1 = u.values.row(0).transpose();
  const auto u2 = u.values.row(1).transpose();
  double value =
      0.5 * params.alpha *
      (disc.weights.dot(u1.cwiseAbs2()) + disc.weights.dot(u2.cwiseAbs2()));
  if (params.eps != 0.0) {
    value += 0.5 * params.eps *
             (u1.dot(disc.grid.laplacian * u1) + u2.dot(disc.grid.laplacian * u2));
  }
  if (params.gamma != 0.0) {
    const Eigen::VectorXd prod = u1.cwiseProduct(u2);
    value += 0.5 * params.gamma * disc.weights.dot(prod.cwiseAbs2());
  }
  return value;
}

}  // namespace

double eval_tracking(const Discretization& disc, const ControlTrajectory& u) {
  check_u(disc, u);
  const StateTrajectory traj = solve_forward(disc.ops, disc.grid, u, disc.y0);
  std::vector<Eigen::VectorXd> res(disc.grid.M);
  for (int k = 0; k < disc.grid.M; ++k) {
    res[k] = traj.y[k] - disc.y_target[k];
  }
  return 0.5 * obs_norm_sq(disc.ops, disc.grid, res);
}

double eval_switch_penalty(const ControlTrajectory& u, const TimeGrid& grid) {
  const Eigen::VectorXd w = control_weights(grid, u.mode);
  if (u.size() != w.size()) {
    throw std::invalid_argument("eval_switch_penalty: size mismatch");
  }
  const Eigen::VectorXd prod =
      u.values.row(0).cwiseProduct(u.values.row(1)).transpose();
  return w.dot(prod.cwiseAbs());
}

double eval_J(const Discretization& disc, const ControlTrajectory& u,
              const ObjectiveParams& params) {
  return eval_tracking(disc, u) + regularizer_terms(disc, u, params) +
         params.beta * eval_switch_penalty(u, disc.grid);
}

double eval_J_gram(const Discretization& disc, const ControlTrajectory& u,
                   const ObjectiveParams& params) {
  check_u(disc, u);
  const Eigen::VectorXd z = stack_control(u.values);
  const double tracking = 0.5 * z.dot(disc.gram.K * z) +
                          disc.gram.affine_term.dot(z) +
                          0.5 * disc.gram.tracking_const;
  return tracking + regularizer_terms(disc, u, params) +
         params.beta * eval_switch_penalty(u, disc.grid);
}

Eigen::VectorXd grad_smooth(const Discretization& disc,
                            const ControlTrajectory& u,
                            const ObjectiveParams& params) {
  check_u(disc, u);
  const int nT = disc.control_dim();
  const Eigen::VectorXd z = stack_control(u.values);

  Eigen::VectorXd g = disc.gram.K * z + disc.gram.affine_term;
  g.head(nT) += params.alpha * disc.weights.cwiseProduct(z.head(nT));
  g.tail(nT) += params.alpha * disc.weights.cwiseProduct(z.tail(nT));
  if (params.eps != 0.0) {
    g.head(nT) += params.eps * (disc.grid.laplacian * z.head(nT));
    g.tail(nT) += params.eps * (disc.grid.laplacian * z.tail(nT));
  }
  if (params.gamma != 0.0) {
    const Eigen::VectorXd u1 = z.head(nT);
    const Eigen::VectorXd u2 = z.tail(nT);
    g.head(nT) += params.gamma *
                  disc.weights.cwiseProduct(u1.cwiseProduct(u2.cwiseAbs2()));
    g.tail(nT) += params.gamma *
                  disc.weights.cwiseProduct(u2.cwiseProduct(u1.cwiseAbs2()));
  }
  return g;
}

double switching_error(const ControlTrajectory& u) {
  return u.values.row(0)
      .cwiseProduct(u.values.row(1))
      .cwiseAbs()
      .maxCoeff();
}

double switching_error_interval(const ControlTrajectory& u) {
  if (u.mode == ControlMode::PiecewiseConstant) {
    return switching_error(u);
  }
  double m = 0.0;
  for (int j = 0; j + 1 < u.size(); ++j) {
    const double m1 = 0.5 * (u.values(0, j) + u.values(0, j + 1));
    const double m2 = 0.5 * (u.values(1, j) + u.values(1, j + 1));
    m = std::max(m, std::abs(m1 * m2));
  }
  return m;
}

int count_switching_points(const ControlTrajectory& u) {
  int count = 0;
  auto dominant = [&](int j) {
    return std::abs(u.values(0, j)) >= std::abs(u.values(1, j));
  };
  for (int j = 0; j + 1 < u.size(); ++j) {
    if (dominant(j) != dominant(j + 1)) {
      ++count;
    }
  }
  return count;
}

ArcReport measure_nonswitching_arcs(const ControlTrajectory& u,
                                    const TimeGrid& grid,
                                    double activity_tol) {
  if (activity_tol < 0.0) {
    const double umax = std::max(u.values.row(0).cwiseAbs().maxCoeff(),
                                 u.values.row(1).cwiseAbs().maxCoeff());
    activity_tol = 1e-8 * umax;
  }

  ArcReport report;
  const int n = u.size();
  const bool nodal = u.mode == ControlMode::NodalH1;
  int run_start = -1;
  auto close_run = [&](int last) {
    Arc arc;
    if (nodal) {
      arc.t_begin = std::max(0.0, grid.nodes[run_start] - 0.5 * grid.tau);
      arc.t_end = std::min(grid.T, grid.nodes[last] + 0.5 * grid.tau);
    } else {
      arc.t_begin = grid.nodes[run_start];
      arc.t_end = grid.nodes[last + 1];
    }
    report.arcs.push_back(arc);
    report.max_length = std::max(report.max_length, arc.length());
    run_start = -1;
  };
  for (int j = 0; j < n; ++j) {
    const bool both_active = std::abs(u.values(0, j)) > activity_tol &&
                             std::abs(u.values(1, j)) > activity_tol;
    if (both_active && run_start < 0) {
      run_start = j;
    } else if (!both_active && run_start >= 0) {
      close_run(j - 1);
    }
  }
  if (run_start >= 0) {
    close_run(n - 1);
  }
  return report;
}

}  // namespace swc
