#include "switchctrl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace swc {

BruteForceResult brute_force_min(const Discretization& disc,
                                 const ObjectiveParams& params,
                                 const std::vector<double>& grid) {
  if (disc.mode != ControlMode::PiecewiseConstant) {
    throw std::invalid_argument(
        "brute_force_min: enumeration is defined for piecewise-constant mode");
  }
  if (grid.empty()) {
    throw std::invalid_argument("brute_force_min: empty value grid");
  }
  validate_params(params, disc.mode);

  std::vector<double> values = grid;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const int dim = 2 * disc.control_dim();
  const double count = std::pow(static_cast<double>(values.size()), dim);
  if (count > 1e7) {
    throw std::invalid_argument(
        "brute_force_min: enumeration bound of 1e7 candidates exceeded");
  }

  ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
  const int nT = disc.control_dim();
  std::vector<int> digit(dim, 0);
  auto apply = [&]() {
    for (int d = 0; d < dim; ++d) {
      u.values(d / nT, d % nT) = values[digit[d]];
    }
  };

  BruteForceResult result;
  result.best_value = std::numeric_limits<double>::infinity();
  // Odometer with the most significant digit first: candidates appear in
  // lexicographic order of the stacked control vector, and only strict
  // improvements are kept, so ties resolve to the lexicographically smallest.
  for (;;) {
    apply();
    ++result.candidates;
    const double value = eval_J_gram(disc, u, params);
    if (value < result.best_value) {
      result.best_value = value;
      result.best_control = u;
    }
    int d = dim - 1;
    while (d >= 0 && digit[d] + 1 == static_cast<int>(values.size())) {
      digit[d] = 0;
      --d;
    }
    if (d < 0) {
      break;
    }
    ++digit[d];
  }
  return result;
}

double fd_gradient_check(const Discretization& disc,
                         const ObjectiveParams& params, int trials, double step,
                         unsigned seed) {
  if (params.beta != 0.0) {
    throw std::invalid_argument(
        "fd_gradient_check: the switching penalty is nondifferentiable; beta "
        "must be 0");
  }
  validate_params(params, disc.mode);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    ControlTrajectory u = ControlTrajectory::zero(disc.mode, disc.grid.M);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < u.size(); ++j) {
        u.values(i, j) = dist(rng);
      }
    }
    const Eigen::VectorXd g = grad_smooth(disc, u, params);

    Eigen::VectorXd g_fd(g.size());
    const int nT = disc.control_dim();
    for (int d = 0; d < g.size(); ++d) {
      ControlTrajectory up = u;
      ControlTrajectory dn = u;
      up.values(d / nT, d % nT) += step;
      dn.values(d / nT, d % nT) -= step;
      g_fd[d] = (eval_J(disc, up, params) - eval_J(disc, dn, params)) /
                (2.0 * step);
    }
    const double scale = std::max({g.norm(), g_fd.norm(), 1e-30});
    worst = std::max(worst, (g - g_fd).norm() / scale);
  }
  return worst;
}

SwitchingPcReport check_exact_switching_pc(const ProblemConfig& config) {
  if (config.mode != ControlMode::PiecewiseConstant || config.eps != 0.0) {
    throw std::invalid_argument(
        "check_exact_switching_pc: requires piecewise-constant mode with eps = 0");
  }
  const Discretization disc = build_discretization(config);

  Eigen::VectorXd w2(2 * disc.control_dim());
  w2 << disc.weights, disc.weights;

  SwitchingPcReport report;
  report.norm_S0_sq = estimate_operator_norm(disc.gram.K, w2);
  report.forced_beta_floor = report.norm_S0_sq + config.alpha;

  HomotopySchedule schedule = config.schedule;
  schedule.min_beta_max = report.forced_beta_floor;
  if (schedule.beta_cap <= report.forced_beta_floor) {
    schedule.beta_cap = report.forced_beta_floor * schedule.factor;
  }
  report.solve = run_homotopy(disc, config.alpha, config.eps, schedule);
  report.beta_max = report.solve.beta_max;

  const auto& u = report.solve.u;
  report.products =
      u.values.row(0).cwiseProduct(u.values.row(1)).transpose();
  report.max_abs_product =
      report.products.size() > 0 ? report.products.cwiseAbs().maxCoeff() : 0.0;
  report.u_inf1 = u.values.row(0).cwiseAbs().maxCoeff();
  report.u_inf2 = u.values.row(1).cwiseAbs().maxCoeff();
  return report;
}

}  // namespace swc
