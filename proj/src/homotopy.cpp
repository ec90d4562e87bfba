#include "switchctrl/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swc {

namespace {

std::vector<double> ascending_grid(double lo, double hi, double factor) {
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double g = lo * std::pow(factor, k);
    if (g >= hi * (1.0 - 1e-12)) {
      grid.push_back(hi);
      break;
    }
    grid.push_back(g);
  }
  return grid;
}

std::vector<double> descending_grid(double hi, double lo, double factor) {
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double g = hi / std::pow(factor, k);
    if (g <= lo * (1.0 + 1e-12)) {
      grid.push_back(lo);
      break;
    }
    grid.push_back(g);
  }
  return grid;
}

double max_norm(const ControlTrajectory& u) {
  return std::max(u.values.row(0).cwiseAbs().maxCoeff(),
                  u.values.row(1).cwiseAbs().maxCoeff());
}

// Continuation-consistent dual warm start: on active nodes the second
// optimality relation pins q - beta = gamma * u1 u2, so a gamma update keeps
// the previous iterate on that manifold instead of carrying a stale offset.
void rescale_dual(DualTrajectory& q, const ControlTrajectory& u, double beta,
                  double gamma) {
  for (int j = 0; j < q.q.size(); ++j) {
    const double prod = u.values(0, j) * u.values(1, j);
    if (q.q[j] > beta) {
      q.q[j] = beta + gamma * prod;
    } else if (q.q[j] < -beta) {
      q.q[j] = -beta + gamma * prod;
    }
  }
}

double gamma_inclusion_gap(const ControlTrajectory& u, const DualTrajectory& q,
                           double beta, double gamma) {
  if (!(gamma > 0.0)) {
    return 0.0;
  }
  double gap = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double resolvent = (std::max(0.0, q.q[j] - beta) +
                              std::min(0.0, q.q[j] + beta)) /
                             gamma;
    gap = std::max(gap,
                   std::abs(u.values(0, j) * u.values(1, j) - resolvent));
  }
  return gap;
}

}  // namespace

SolveReport run_homotopy(const Discretization& disc, double alpha, double eps,
                         const HomotopySchedule& schedule) {
  ObjectiveParams params;
  params.alpha = alpha;
  params.eps = eps;
  params.beta = schedule.beta_min;
  params.gamma = 0.0;
  validate_params(params, disc.mode);

  SsnOptions opts;
  opts.max_iter = schedule.newton.max_iter;
  opts.rel_tol = schedule.newton.rel_tol;
  opts.abs_tol = schedule.newton.abs_tol;
  opts.derivative = schedule.derivative;

  SolveReport out;

  auto record = [&](int phase, double beta, double gamma,
                    const NewtonReport& newton, const ControlTrajectory& u,
                    const DualTrajectory& q) {
    HomotopyRecord rec;
    rec.phase = phase;
    rec.beta = beta;
    rec.gamma = gamma;
    rec.newton = newton;
    rec.sigma_sw = switching_error(u);
    ObjectiveParams jp = params;
    jp.beta = beta;
    jp.gamma = 0.0;
    rec.objective = eval_J(disc, u, jp);
    rec.my_gap = gamma_inclusion_gap(u, q, beta, gamma);
    rec.u_inf = max_norm(u);
    const ActivePattern pattern = classify_active(q.q, beta);
    rec.active_upper = pattern.count_upper();
    rec.active_lower = pattern.count_lower();
    out.log.push_back(std::move(rec));
  };

  // Phase 0: smooth solve at gamma = 0 (the Newton system would be singular
  // there, so the quadratic problem is solved directly).
  ControlTrajectory u = init_solve(disc, params);
  DualTrajectory q = DualTrajectory::zero(disc.mode, disc.grid.M);
  {
    NewtonReport init_report;
    init_report.residual_norms.push_back(grad_smooth(disc, u, params).norm());
    init_report.converged = true;
    init_report.termination = NewtonReport::Termination::Absolute;
    record(0, schedule.beta_min, 0.0, init_report, u, q);
  }

  // Phase 1: gamma-up at beta_min.
  params.beta = schedule.beta_min;
  for (const double gamma :
       ascending_grid(schedule.gamma_min, schedule.gamma_max, schedule.factor)) {
    params.gamma = gamma;
    rescale_dual(q, u, params.beta, gamma);
    SsnResult res = ssn_solve(disc, u, q, params, opts);
    u = std::move(res.u);
    q = std::move(res.q);
    record(1, params.beta, gamma, res.report, u, q);
  }

  // Phase 2: beta-up at gamma_max until the relative switching tolerance
  // holds (and beta exceeds any continuation floor), or beta_cap is reached.
  params.gamma = schedule.gamma_max;
  double beta = schedule.beta_min;
  out.switched = false;
  for (;;) {
    params.beta = beta;
    SsnResult res = ssn_solve(disc, u, q, params, opts);
    u = std::move(res.u);
    q = std::move(res.q);
    record(2, beta, params.gamma, res.report, u, q);

    const double sigma = switching_error(u);
    if (sigma <= schedule.sw_rel_tol * max_norm(u) &&
        beta > schedule.min_beta_max) {
      out.switched = true;
      break;
    }
    if (beta >= schedule.beta_cap * (1.0 - 1e-12)) {
      break;
    }
    beta = std::min(beta * schedule.factor, schedule.beta_cap);
  }
  out.beta_max = beta;

  // Phase 3: gamma-down at beta_max, starting from gamma_max itself.
  params.beta = out.beta_max;
  for (const double gamma :
       descending_grid(schedule.gamma_max, schedule.gamma_min, schedule.factor)) {
    params.gamma = gamma;
    rescale_dual(q, u, params.beta, gamma);
    SsnResult res = ssn_solve(disc, u, q, params, opts);
    u = std::move(res.u);
    q = std::move(res.q);
    record(3, params.beta, gamma, res.report, u, q);
  }

  out.u = std::move(u);
  out.q = std::move(q);
  ObjectiveParams final_params = params;
  final_params.beta = out.beta_max;
  final_params.gamma = 0.0;
  out.objective = eval_J(disc, out.u, final_params);
  out.switch_count = count_switching_points(out.u);
  out.switching_error = swc::switching_error(out.u);
  out.switching_error_interval = swc::switching_error_interval(out.u);
  out.residual_norm = out.log.back().newton.residual_norms.back();
  return out;
}

SolveReport run_homotopy(const ProblemConfig& config) {
  const Discretization disc = build_discretization(config);
  return run_homotopy(disc, config.alpha, config.eps, config.schedule);
}

std::vector<SweepEntry> sweep(const ProblemConfig& config,
                              const std::string& parameter,
                              const std::vector<double>& values) {
  if (parameter != "alpha" && parameter != "eps") {
    throw std::invalid_argument("sweep: parameter must be 'alpha' or 'eps'");
  }
  const Discretization disc = build_discretization(config);

  std::vector<SweepEntry> entries;
  entries.reserve(values.size());
  for (const double v : values) {
    SweepEntry entry;
    entry.value = v;
    ProblemConfig c = config;
    (parameter == "alpha" ? c.alpha : c.eps) = v;
    try {
      validate_config(c);
      entry.report = run_homotopy(disc, c.alpha, c.eps, c.schedule);
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace swc
