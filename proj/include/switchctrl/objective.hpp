#pragma once

#include <vector>

#include <Eigen/Core>

#include "switchctrl/discretization.hpp"

namespace swc {

/// Weights of the penalized tracking objective
///   1/2 ||S u - y^d||^2 + alpha/2 ||u||^2 + eps/2 ||u_t||^2
///   + beta * sum_j w_j |u_1j u_2j| + gamma/2 * sum_j w_j (u_1j u_2j)^2.
struct ObjectiveParams {
  double alpha = 1e-6;
  double beta = 0.0;
  double eps = 0.0;
  double gamma = 0.0;
};

/// Throws std::invalid_argument if alpha <= 0, any of beta/eps/gamma is
/// negative, or eps = 0 outside piecewise-constant mode.
void validate_params(const ObjectiveParams& params, ControlMode mode);

/// Tracking term via a forward solve and the observation pairing.
double eval_tracking(const Discretization& disc, const ControlTrajectory& u);

/// Discrete switching penalty sum_j w_j |u_1j u_2j| (interval form in
/// piecewise-constant mode).
double eval_switch_penalty(const ControlTrajectory& u, const TimeGrid& grid);

/// Full objective; the tracking term is evaluated by a forward solve.
double eval_J(const Discretization& disc, const ControlTrajectory& u,
              const ObjectiveParams& params);

/// Same value through the assembled Gram data (no PDE solves). This is the
/// evaluation the Newton solver and the enumeration oracle share.
double eval_J_gram(const Discretization& disc, const ControlTrajectory& u,
                   const ObjectiveParams& params);

/// Coefficient gradient of the smooth part (beta excluded), stacked
/// component-major: K z + g0 + alpha W z + eps L_t u_i + gamma w u_i u_i'^2.
Eigen::VectorXd grad_smooth(const Discretization& disc,
                            const ControlTrajectory& u,
                            const ObjectiveParams& params);

/// sigma_sw = max_j |u_1j u_2j| over nodes (or intervals).
double switching_error(const ControlTrajectory& u);

/// Interval-product diagnostic: midpoint products in H^1 mode, identical to
/// switching_error in piecewise-constant mode.
double switching_error_interval(const ControlTrajectory& u);

/// Number of dominance changes between |u_1| and |u_2| along the grid.
int count_switching_points(const ControlTrajectory& u);

struct Arc {
  double t_begin = 0.0;
  double t_end = 0.0;
  double length() const { return t_end - t_begin; }
};

struct ArcReport {
  std::vector<Arc> arcs;
  double max_length = 0.0;
};

/// Maximal runs of consecutive coefficients where both components exceed
/// activity_tol in magnitude. A run covers the lumped cells of its nodes
/// (clamped to [0,T]), so a single interior node has length tau and a run over
/// the whole grid has length T. Negative activity_tol selects the default
/// 1e-8 * max(||u_1||_inf, ||u_2||_inf).
ArcReport measure_nonswitching_arcs(const ControlTrajectory& u,
                                    const TimeGrid& grid,
                                    double activity_tol = -1.0);

}  // namespace swc
