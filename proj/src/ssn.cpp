#include "switchctrl/ssn.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace swc {

double ResidualVector::norm() const { return stacked().norm(); }

Eigen::VectorXd ResidualVector::stacked() const {
  const int nT = static_cast<int>(F1.cols());
  Eigen::VectorXd v(3 * nT);
  v.head(2 * nT) = stack_control(F1);
  v.tail(nT) = F2;
  return v;
}

int ActivePattern::count_upper() const {
  return static_cast<int>(std::count(upper.begin(), upper.end(), true));
}

int ActivePattern::count_lower() const {
  return static_cast<int>(std::count(lower.begin(), lower.end(), true));
}

ActivePattern classify_active(const Eigen::VectorXd& q, double beta) {
  ActivePattern p;
  const int n = static_cast<int>(q.size());
  p.upper.resize(n);
  p.lower.resize(n);
  for (int j = 0; j < n; ++j) {
    p.upper[j] = q[j] > beta;
    p.lower[j] = q[j] < -beta;
  }
  return p;
}

namespace {

void check_iterate(const Discretization& disc, const ControlTrajectory& u,
                   const DualTrajectory& q) {
  if (u.mode != disc.mode || u.size() != disc.control_dim() ||
      q.q.size() != disc.control_dim()) {
    throw std::invalid_argument("ssn: iterate inconsistent with problem");
  }
}

// Smooth quadratic Hessian K + alpha W + eps blkdiag(L_t, L_t).
Eigen::MatrixXd smooth_hessian(const Discretization& disc,
                               const ObjectiveParams& params) {
  const int nT = disc.control_dim();
  Eigen::MatrixXd H = disc.gram.K;
  for (int j = 0; j < nT; ++j) {
    H(j, j) += params.alpha * disc.weights[j];
    H(nT + j, nT + j) += params.alpha * disc.weights[j];
  }
  if (params.eps != 0.0) {
    const Eigen::MatrixXd L = Eigen::MatrixXd(disc.grid.laplacian);
    H.topLeftCorner(nT, nT) += params.eps * L;
    H.bottomRightCorner(nT, nT) += params.eps * L;
  }
  return H;
}

}  // namespace

ResidualVector residual(const Discretization& disc, const ControlTrajectory& u,
                        const DualTrajectory& q, const ObjectiveParams& params) {
  check_iterate(disc, u, q);
  const int nT = disc.control_dim();

  ObjectiveParams smooth = params;
  smooth.gamma = 0.0;
  Eigen::VectorXd g = grad_smooth(disc, u, smooth);
  const Eigen::VectorXd wq = disc.weights.cwiseProduct(q.q);
  g.head(nT) += wq.cwiseProduct(u.values.row(1).transpose());
  g.tail(nT) += wq.cwiseProduct(u.values.row(0).transpose());

  ResidualVector r;
  r.F1 = unstack_control(g);
  r.F2.resize(nT);
  for (int j = 0; j < nT; ++j) {
    r.F2[j] = params.gamma * u.values(0, j) * u.values(1, j) -
              std::max(0.0, q.q[j] - params.beta) -
              std::min(0.0, q.q[j] + params.beta);
  }
  return r;
}

Eigen::MatrixXd assemble_newton_matrix(const Discretization& disc,
                                       const ControlTrajectory& u,
                                       const DualTrajectory& q,
                                       const ObjectiveParams& params,
                                       NewtonDerivative derivative) {
  check_iterate(disc, u, q);
  const int nT = disc.control_dim();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * nT, 3 * nT);
  J.topLeftCorner(2 * nT, 2 * nT) = smooth_hessian(disc, params);

  for (int j = 0; j < nT; ++j) {
    const double wq = disc.weights[j] * q.q[j];
    J(j, nT + j) += wq;
    J(nT + j, j) += wq;

    J(j, 2 * nT + j) = disc.weights[j] * u.values(1, j);
    J(nT + j, 2 * nT + j) = disc.weights[j] * u.values(0, j);

    J(2 * nT + j, j) = params.gamma * u.values(1, j);
    J(2 * nT + j, nT + j) = params.gamma * u.values(0, j);

    double dq;
    if (derivative == NewtonDerivative::Standard) {
      dq = (q.q[j] > params.beta || q.q[j] < -params.beta) ? 1.0 : 0.0;
    } else {
      dq = (q.q[j] <= params.beta ? 1.0 : 0.0) +
           (q.q[j] >= -params.beta ? 1.0 : 0.0);
    }
    J(2 * nT + j, 2 * nT + j) = -dq;
  }
  return J;
}

namespace {

// Power-of-two row/column equilibration: exact in floating point, so it
// changes neither determinism nor the computed step beyond conditioning.
// Rows that are identically zero make the system singular and are left for
// the rank check to reject.
Eigen::VectorXd pow2_scaling(const Eigen::MatrixXd& J, bool rows) {
  const int n = static_cast<int>(J.rows());
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    const double m =
        rows ? J.row(i).cwiseAbs().maxCoeff() : J.col(i).cwiseAbs().maxCoeff();
    s[i] = m > 0.0 ? std::exp2(-std::ilogb(m)) : 1.0;
  }
  return s;
}

}  // namespace

NewtonStep newton_step(const Discretization& disc, const ControlTrajectory& u,
                       const DualTrajectory& q, const ObjectiveParams& params,
                       NewtonDerivative derivative) {
  if (!(params.gamma > 0.0)) {
    throw std::invalid_argument("newton_step: gamma must be positive");
  }
  const int nT = disc.control_dim();
  Eigen::MatrixXd J = assemble_newton_matrix(disc, u, q, params, derivative);
  const ResidualVector r = residual(disc, u, q, params);

  // The blocks of J can differ by many orders of magnitude (gamma-scaled
  // complementarity rows against alpha-weighted stationarity rows), which
  // makes the raw rank test reject well-posed systems. Equilibrate first.
  const Eigen::VectorXd row_scale = pow2_scaling(J, true);
  J = row_scale.asDiagonal() * J;
  const Eigen::VectorXd col_scale = pow2_scaling(J, false);
  J = J * col_scale.asDiagonal();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
  if (!lu.isInvertible()) {
    throw SingularNewtonError("newton_step: singular Newton matrix",
                              classify_active(q.q, params.beta));
  }
  const Eigen::VectorXd delta = col_scale.cwiseProduct(
      lu.solve(row_scale.cwiseProduct(-r.stacked())));

  NewtonStep step;
  step.du = unstack_control(delta.head(2 * nT));
  step.dq = delta.tail(nT);
  step.pattern = classify_active(q.q, params.beta);
  return step;
}

SsnResult ssn_solve(const Discretization& disc, const ControlTrajectory& u0,
                    const DualTrajectory& q0, const ObjectiveParams& params,
                    const SsnOptions& options) {
  if (!(params.gamma > 0.0)) {
    throw std::invalid_argument("ssn_solve: gamma must be positive");
  }
  SsnResult res;
  res.u = u0;
  res.q = q0;

  double norm = residual(disc, res.u, res.q, params).norm();
  const double norm0 = norm;
  res.report.residual_norms.push_back(norm);

  auto check = [&](double n) {
    if (n <= options.abs_tol) {
      res.report.converged = true;
      res.report.termination = NewtonReport::Termination::Absolute;
      return true;
    }
    if (n <= options.rel_tol * norm0) {
      res.report.converged = true;
      res.report.termination = NewtonReport::Termination::Relative;
      return true;
    }
    return false;
  };

  if (check(norm)) {
    return res;
  }
  for (int k = 0; k < options.max_iter; ++k) {
    const NewtonStep step =
        newton_step(disc, res.u, res.q, params, options.derivative);
    res.u.values += step.du;
    res.q.q += step.dq;
    ++res.report.iterations;
    norm = residual(disc, res.u, res.q, params).norm();
    res.report.residual_norms.push_back(norm);
    if (check(norm)) {
      return res;
    }
  }
  res.report.termination = NewtonReport::Termination::MaxIterations;
  return res;
}

ControlTrajectory init_solve(const Discretization& disc,
                             const ObjectiveParams& params) {
  Eigen::MatrixXd H = smooth_hessian(disc, params);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("init_solve: factorization failed");
  }
  const Eigen::VectorXd z = ldlt.solve(-disc.gram.affine_term);

  ControlTrajectory u;
  u.mode = disc.mode;
  u.values = unstack_control(z);
  return u;
}

}  // namespace swc
