#include "switchctrl.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "switchctrl/config.hpp"
#include "switchctrl/homotopy.hpp"
#include "switchctrl/io.hpp"
#include "switchctrl/oracle.hpp"

struct swc_problem {
  swc::ProblemConfig config;
};

struct swc_result {
  swc::ProblemConfig config;
  swc::SolveReport report;
};

namespace {

thread_local std::string g_last_error;

swc_status set_error(swc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

swc_status from_exception() {
  try {
    throw;
  } catch (const swc::ConfigError& e) {
    const std::string what = e.what();
    return set_error(
        what.find("parse error") != std::string::npos ? SWC_ERR_PARSE
                                                      : SWC_ERR_VALIDATION,
        what);
  } catch (const swc::SingularNewtonError& e) {
    return set_error(SWC_ERR_SOLVER, e.what());
  } catch (const swc::PowerIterationError& e) {
    return set_error(SWC_ERR_SOLVER, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SWC_ERR_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SWC_ERR_SOLVER, e.what());
  } catch (...) {
    return set_error(SWC_ERR_SOLVER, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* swc_version(void) { return "0.1.0"; }

const char* swc_last_error(void) { return g_last_error.c_str(); }

void swc_string_free(char* s) { delete[] s; }

swc_status swc_problem_from_file(const char* path, swc_problem** out) {
  if (path == nullptr || out == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  try {
    auto* p = new swc_problem{swc::load_config(path)};
    *out = p;
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_problem_from_json(const char* text, swc_problem** out) {
  if (text == nullptr || out == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  try {
    auto* p = new swc_problem{swc::parse_config_text(text)};
    *out = p;
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_problem_to_json(const swc_problem* problem, char** out) {
  if (problem == nullptr || out == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    *out = copy_string(swc::config_to_json(problem->config));
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_problem_set_real(swc_problem* problem, const char* name,
                                double value) {
  if (problem == nullptr || name == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    swc::ProblemConfig next = problem->config;
    const std::string key(name);
    if (key == "alpha") {
      next.alpha = value;
    } else if (key == "eps") {
      next.eps = value;
    } else {
      return set_error(SWC_ERR_INVALID_ARGUMENT,
                       "unknown parameter '" + key + "'");
    }
    swc::validate_config(next);
    problem->config = next;
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

void swc_problem_free(swc_problem* problem) { delete problem; }

swc_status swc_solve(const swc_problem* problem, swc_result** out) {
  if (problem == nullptr || out == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  try {
    auto* r = new swc_result{problem->config,
                             swc::run_homotopy(problem->config)};
    *out = r;
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

void swc_result_free(swc_result* result) { delete result; }

double swc_result_objective(const swc_result* result) {
  return result->report.objective;
}

double swc_result_switching_error(const swc_result* result) {
  return result->report.switching_error;
}

double swc_result_beta_max(const swc_result* result) {
  return result->report.beta_max;
}

double swc_result_residual_norm(const swc_result* result) {
  return result->report.residual_norm;
}

int swc_result_switch_count(const swc_result* result) {
  return result->report.switch_count;
}

int swc_result_switched(const swc_result* result) {
  return result->report.switched ? 1 : 0;
}

swc_status swc_result_to_json(const swc_result* result, char** out) {
  if (result == nullptr || out == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    *out = copy_string(swc::report_to_json(result->config, result->report));
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_result_write_artifacts(const swc_result* result,
                                      const char* dir) {
  if (result == nullptr || dir == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    swc::write_artifacts(result->config, result->report, dir);
    return SWC_OK;
  } catch (const std::runtime_error& e) {
    return set_error(SWC_ERR_IO, e.what());
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_sweep(const swc_problem* problem, const char* parameter,
                     const double* values, size_t n_values,
                     const char* out_dir, char** summary_json) {
  if (problem == nullptr || parameter == nullptr ||
      (values == nullptr && n_values > 0)) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    const std::vector<double> vals(values, values + n_values);
    const auto entries = swc::sweep(problem->config, parameter, vals);
    if (out_dir != nullptr) {
      swc::write_sweep_artifacts(problem->config, parameter, entries, out_dir);
    }
    if (summary_json != nullptr) {
      *summary_json = copy_string(swc::sweep_summary_json(parameter, entries));
    }
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_check_gradient(const swc_problem* problem, double gamma,
                              int trials, double step, double* max_rel_error) {
  if (problem == nullptr || max_rel_error == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    const swc::Discretization disc =
        swc::build_discretization(problem->config);
    swc::ObjectiveParams params;
    params.alpha = problem->config.alpha;
    params.eps = problem->config.eps;
    params.beta = 0.0;
    params.gamma = gamma;
    *max_rel_error = swc::fd_gradient_check(disc, params, trials, step);
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_oracle_compare(const swc_problem* problem, char** report_json) {
  if (problem == nullptr || report_json == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    const swc::ProblemConfig& config = problem->config;
    if (config.oracle_grid.empty()) {
      return set_error(SWC_ERR_VALIDATION,
                       "config has no oracle.grid value list");
    }
    const swc::Discretization disc = swc::build_discretization(config);
    swc::ObjectiveParams params;
    params.alpha = config.alpha;
    params.eps = config.eps;
    params.beta = config.schedule.beta_min;
    params.gamma = 0.0;

    const swc::SolveReport solve =
        swc::run_homotopy(disc, config.alpha, config.eps, config.schedule);
    // The enumeration competes on the solver's final objective: J at beta_max.
    params.beta = solve.beta_max;
    const swc::BruteForceResult brute =
        swc::brute_force_min(disc, params, config.oracle_grid);

    nlohmann::json j;
    j["oracle_value"] = brute.best_value;
    j["candidates"] = brute.candidates;
    j["solver_value"] = solve.objective;
    j["gap"] = solve.objective - brute.best_value;
    j["solver_dominates"] = solve.objective <= brute.best_value + 1e-6;
    j["beta_max"] = solve.beta_max;
    j["oracle_u1"] = std::vector<double>(brute.best_control.values.row(0).begin(),
                                         brute.best_control.values.row(0).end());
    j["oracle_u2"] = std::vector<double>(brute.best_control.values.row(1).begin(),
                                         brute.best_control.values.row(1).end());
    *report_json = copy_string(j.dump(2) + "\n");
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

swc_status swc_check_switching_pc(const swc_problem* problem,
                                  char** report_json) {
  if (problem == nullptr || report_json == nullptr) {
    return set_error(SWC_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    const swc::SwitchingPcReport rep =
        swc::check_exact_switching_pc(problem->config);
    nlohmann::json j;
    j["norm_S0_sq"] = rep.norm_S0_sq;
    j["forced_beta_floor"] = rep.forced_beta_floor;
    j["beta_max"] = rep.beta_max;
    j["max_abs_product"] = rep.max_abs_product;
    j["products"] = std::vector<double>(rep.products.begin(), rep.products.end());
    j["u_inf1"] = rep.u_inf1;
    j["u_inf2"] = rep.u_inf2;
    j["switched"] = rep.solve.switched;
    const double scale = std::max(rep.u_inf1 * rep.u_inf2, 1.0);
    j["within_tolerance"] = rep.max_abs_product <= 1e-12 * scale;
    *report_json = copy_string(j.dump(2) + "\n");
    return SWC_OK;
  } catch (...) {
    return from_exception();
  }
}

}  // extern "C"
