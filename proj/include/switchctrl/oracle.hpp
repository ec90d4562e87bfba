#pragma once

#include <vector>

#include <Eigen/Core>

#include "switchctrl/config.hpp"
#include "switchctrl/homotopy.hpp"
#include "switchctrl/objective.hpp"

namespace swc {

struct BruteForceResult {
  double best_value = 0.0;
  ControlTrajectory best_control;
  long long candidates = 0;
};

/// Exhaustive minimization of the objective over the product grid of
/// admissible interval values (piecewise-constant mode only). Ties are broken
/// by lexicographic order of the stacked control vector. Throws
/// std::invalid_argument when the enumeration exceeds 1e7 candidates.
BruteForceResult brute_force_min(const Discretization& disc,
                                 const ObjectiveParams& params,
                                 const std::vector<double>& grid);

/// Worst relative error between grad_smooth and central finite differences of
/// the objective at `trials` random controls. Requires beta = 0.
double fd_gradient_check(const Discretization& disc,
                         const ObjectiveParams& params, int trials, double step,
                         unsigned seed = 20240817u);

struct SwitchingPcReport {
  double norm_S0_sq = 0.0;
  double forced_beta_floor = 0.0;  ///< norm_S0_sq + alpha
  double beta_max = 0.0;
  Eigen::VectorXd products;  ///< per-interval xi_1 xi_2 of the final control
  double max_abs_product = 0.0;
  double u_inf1 = 0.0;
  double u_inf2 = 0.0;
  SolveReport solve;
};

/// Exact-penalization check for piecewise-constant controls: estimates the
/// squared operator norm, forces the beta-continuation above norm + alpha and
/// reports the per-interval products of the computed control.
SwitchingPcReport check_exact_switching_pc(const ProblemConfig& config);

}  // namespace swc
