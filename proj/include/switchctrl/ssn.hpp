#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "switchctrl/discretization.hpp"
#include "switchctrl/objective.hpp"

namespace swc {

/// Which generalized derivative the pointwise max/min selections use. The
/// standard selection picks 1 where the max (resp. min) branch is active;
/// the paper variant picks the complementary branch as printed in the
/// reference the method follows.
enum class NewtonDerivative { Standard, PaperVariant };

/// Residual of the regularized optimality system at fixed (beta, gamma):
///   F1_ij = (K z + g0)_ij + alpha w_j u_ij + eps (L_t u_i)_j + w_j q_j u_i'j
///   F2_j  = gamma u_1j u_2j - max(0, q_j - beta) - min(0, q_j + beta).
struct ResidualVector {
  Eigen::Matrix2Xd F1;
  Eigen::VectorXd F2;

  double norm() const;
  Eigen::VectorXd stacked() const;  ///< (F1_1; F1_2; F2)
};

struct ActivePattern {
  std::vector<bool> upper;  ///< q_j > beta
  std::vector<bool> lower;  ///< q_j < -beta
  int count_upper() const;
  int count_lower() const;
};

struct SingularNewtonError : std::runtime_error {
  SingularNewtonError(const std::string& what, ActivePattern p)
      : std::runtime_error(what), pattern(std::move(p)) {}
  ActivePattern pattern;
};

struct NewtonReport {
  std::vector<double> residual_norms;  ///< includes the initial residual
  int iterations = 0;
  bool converged = false;
  enum class Termination { Absolute, Relative, MaxIterations } termination =
      Termination::MaxIterations;
};

struct SsnOptions {
  int max_iter = 5;
  double rel_tol = 1e-6;
  double abs_tol = 1e-7;
  NewtonDerivative derivative = NewtonDerivative::Standard;
};

ResidualVector residual(const Discretization& disc, const ControlTrajectory& u,
                        const DualTrajectory& q, const ObjectiveParams& params);

ActivePattern classify_active(const Eigen::VectorXd& q, double beta);

/// Dense Newton matrix for the given iterate (exposed for the block tests).
Eigen::MatrixXd assemble_newton_matrix(const Discretization& disc,
                                       const ControlTrajectory& u,
                                       const DualTrajectory& q,
                                       const ObjectiveParams& params,
                                       NewtonDerivative derivative);

struct NewtonStep {
  Eigen::Matrix2Xd du;
  Eigen::VectorXd dq;
  ActivePattern pattern;
};

/// One full Newton step; throws SingularNewtonError (carrying the active
/// pattern) if the system matrix is rank deficient.
NewtonStep newton_step(const Discretization& disc, const ControlTrajectory& u,
                       const DualTrajectory& q, const ObjectiveParams& params,
                       NewtonDerivative derivative = NewtonDerivative::Standard);

struct SsnResult {
  ControlTrajectory u;
  DualTrajectory q;
  NewtonReport report;
};

/// Full-step semismooth Newton run: stops at ||F|| <= abs_tol, at
/// ||F|| <= rel_tol * ||F(u0,q0)||, or after max_iter steps.
SsnResult ssn_solve(const Discretization& disc, const ControlTrajectory& u0,
                    const DualTrajectory& q0, const ObjectiveParams& params,
                    const SsnOptions& options);

/// Smooth quadratic solve used at gamma = 0 (the homotopy's initial point):
/// (K + alpha W + eps L_t) u = -g0, q = 0.
ControlTrajectory init_solve(const Discretization& disc,
                             const ObjectiveParams& params);

}  // namespace swc
