#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "switchctrl/operators.hpp"
#include "switchctrl/time_grid.hpp"

namespace swc {

/// State of the discrete heat equation: one nodal vector per time node,
/// y[0] equal to the initial state.
struct StateTrajectory {
  std::vector<Eigen::VectorXd> y;
};

/// Factorization of the implicit Euler step matrix M_x + tau A_x, shared by
/// the forward and adjoint sweeps (the matrix is symmetric).
class ImplicitStepSolver {
 public:
  ImplicitStepSolver(const SpatialOperators& ops, double tau);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::SparseMatrix<double> system_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

/// Implicit Euler: (M_x + tau A_x) y^{k+1} = M_x y^k + tau sum_i u_i(t_{k+1}) b_i.
/// In piecewise-constant mode u_i(t_{k+1}) is the value on interval k.
StateTrajectory solve_forward(const SpatialOperators& ops, const TimeGrid& grid,
                              const ControlTrajectory& u,
                              const Eigen::VectorXd& y0);
StateTrajectory solve_forward(const ImplicitStepSolver& step,
                              const SpatialOperators& ops, const TimeGrid& grid,
                              const ControlTrajectory& u,
                              const Eigen::VectorXd& y0);

/// Observation-space pairing: trapezoidal weights in time, obs_mass in space.
double obs_inner(const SpatialOperators& ops, const TimeGrid& grid,
                 const std::vector<Eigen::VectorXd>& a,
                 const std::vector<Eigen::VectorXd>& b);
double obs_norm_sq(const SpatialOperators& ops, const TimeGrid& grid,
                   const std::vector<Eigen::VectorXd>& a);

/// Control-space pairing on stacked coefficients with the lumped weights.
double control_inner(const TimeGrid& grid, ControlMode mode,
                     const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b);

/// Exact discrete adjoint of (forward solve -> observation): the returned
/// coefficients g satisfy <obs(S0 u), r>_obs = <u, g>_ctrl for every u.
Eigen::Matrix2Xd apply_S0_adjoint(const SpatialOperators& ops,
                                  const TimeGrid& grid, ControlMode mode,
                                  const std::vector<Eigen::VectorXd>& residual);
Eigen::Matrix2Xd apply_S0_adjoint(const ImplicitStepSolver& step,
                                  const SpatialOperators& ops,
                                  const TimeGrid& grid, ControlMode mode,
                                  const std::vector<Eigen::VectorXd>& residual);

/// Dense control-space data for the quadratic part of the objective.
///
/// K is the observation-pairing Gram matrix of the linear control-to-state
/// map: K(a,b) = <obs(S0 e_a), obs(S0 e_b)>_obs, so u^T K u = ||obs(S0 u)||^2
/// and K represents S0*S0 in the control pairing. affine_term is the matching
/// coefficient gradient of the affine tracking part and tracking_const its
/// constant, so that 1/2 z^T K z + affine^T z + 1/2 const is the tracking
/// functional of the stacked coefficients z = (u_1; u_2).
struct GramData {
  Eigen::MatrixXd K;
  Eigen::VectorXd affine_term;
  double tracking_const = 0.0;
  double norm_S0_sq = 0.0;  ///< largest eigenvalue of K v = lambda W v
};

GramData assemble_gram(const SpatialOperators& ops, const TimeGrid& grid,
                       ControlMode mode,
                       const std::vector<Eigen::VectorXd>& y_target,
                       const Eigen::VectorXd& y0);

struct PowerIterationError : std::runtime_error {
  PowerIterationError(const std::string& what, double last)
      : std::runtime_error(what), last_estimate(last) {}
  double last_estimate;
};

/// Largest eigenvalue of K v = lambda W v by power iteration on W^{-1} K.
/// Throws PowerIterationError (carrying the last iterate) on non-convergence.
double estimate_operator_norm(const Eigen::MatrixXd& K,
                              const Eigen::VectorXd& weights,
                              double rel_tol = 1e-8, int max_iter = 100000);

/// Stacking between the 2 x nT coefficient layout and the component-major
/// vector (u_1 block then u_2 block) used by the dense solver kernels.
Eigen::VectorXd stack_control(const Eigen::Matrix2Xd& values);
Eigen::Matrix2Xd unstack_control(const Eigen::VectorXd& z);

}  // namespace swc
