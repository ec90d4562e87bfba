#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

namespace swc {

/// Uniform temporal grid with lumped (trapezoidal) quadrature weights and the
/// 1D P1 stiffness matrix realizing the discrete H^1 seminorm.
struct TimeGrid {
  double T = 0.0;
  int M = 0;          ///< number of nodes
  double tau = 0.0;   ///< step T/(M-1)
  Eigen::VectorXd nodes;                  ///< t_0 = 0 < ... < t_{M-1} = T
  Eigen::VectorXd weights;                ///< tau/2 at the ends, tau inside
  Eigen::SparseMatrix<double> laplacian;  ///< L_t, tridiagonal, natural BCs
};

/// Throws std::invalid_argument for T <= 0 or M < 2.
TimeGrid build_time_grid(double T, int M);

/// Control discretization: continuous piecewise linear (nodal coefficients)
/// or piecewise constant (one value per interval).
enum class ControlMode { NodalH1, PiecewiseConstant };

/// Coefficients per control component for a grid with M nodes.
int control_size(ControlMode mode, int M);

/// Discrete L^2 pairing weights on the control coefficients: the lumped nodal
/// weights in H^1 mode, the interval lengths in piecewise-constant mode.
Eigen::VectorXd control_weights(const TimeGrid& grid, ControlMode mode);

/// Two-component control on the time grid. Row i of `values` holds component
/// i's coefficients (M nodal values or M-1 interval values).
struct ControlTrajectory {
  ControlMode mode = ControlMode::NodalH1;
  Eigen::Matrix2Xd values;

  static ControlTrajectory zero(ControlMode mode, int M);
  int size() const { return static_cast<int>(values.cols()); }
  bool all_finite() const { return values.allFinite(); }
};

/// Multiplier for the switching penalty, discretized like one control
/// component (nodal values in H^1 mode, interval values otherwise).
struct DualTrajectory {
  Eigen::VectorXd q;

  static DualTrajectory zero(ControlMode mode, int M);
};

}  // namespace swc
