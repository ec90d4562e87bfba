// Command line front end; works exclusively through the C API.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "switchctrl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotSwitched = 2;

struct ProblemDeleter {
  void operator()(swc_problem* p) const { swc_problem_free(p); }
};
struct ResultDeleter {
  void operator()(swc_result* r) const { swc_result_free(r); }
};
using ProblemPtr = std::unique_ptr<swc_problem, ProblemDeleter>;
using ResultPtr = std::unique_ptr<swc_result, ResultDeleter>;

std::string take_string(char* s) {
  std::string out = s != nullptr ? s : "";
  swc_string_free(s);
  return out;
}

int fail(const std::string& context) {
  std::fprintf(stderr, "error: %s: %s\n", context.c_str(), swc_last_error());
  return kExitError;
}

ProblemPtr load_problem(const std::string& path, int& exit_code) {
  swc_problem* raw = nullptr;
  if (swc_problem_from_file(path.c_str(), &raw) != SWC_OK) {
    exit_code = fail("loading " + path);
    return nullptr;
  }
  exit_code = kExitOk;
  return ProblemPtr(raw);
}

int run_solve(const std::string& config_path, const std::string& out_dir) {
  int code = kExitOk;
  ProblemPtr problem = load_problem(config_path, code);
  if (!problem) {
    return code;
  }

  swc_result* raw = nullptr;
  if (swc_solve(problem.get(), &raw) != SWC_OK) {
    return fail("solve");
  }
  ResultPtr result(raw);

  std::printf("objective            %.12g\n", swc_result_objective(result.get()));
  std::printf("switch count         %d\n", swc_result_switch_count(result.get()));
  std::printf("switching error      %.6g\n",
              swc_result_switching_error(result.get()));
  std::printf("beta_max             %.6g\n", swc_result_beta_max(result.get()));
  std::printf("residual norm        %.6g\n",
              swc_result_residual_norm(result.get()));
  std::printf("switched             %s\n",
              swc_result_switched(result.get()) ? "yes" : "no");

  if (!out_dir.empty()) {
    if (swc_result_write_artifacts(result.get(), out_dir.c_str()) != SWC_OK) {
      return fail("writing artifacts to " + out_dir);
    }
    std::printf("artifacts written to %s\n", out_dir.c_str());
  }
  return swc_result_switched(result.get()) ? kExitOk : kExitNotSwitched;
}

int run_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<double>& values, const std::string& out_dir) {
  int code = kExitOk;
  ProblemPtr problem = load_problem(config_path, code);
  if (!problem) {
    return code;
  }

  char* summary = nullptr;
  if (swc_sweep(problem.get(), parameter.c_str(), values.data(), values.size(),
                out_dir.empty() ? nullptr : out_dir.c_str(),
                &summary) != SWC_OK) {
    return fail("sweep");
  }
  const std::string text = take_string(summary);
  std::fputs(text.c_str(), stdout);

  bool any_error = false;
  bool any_not_switched = false;
  const auto j = nlohmann::json::parse(text);
  for (const auto& entry : j.at("entries")) {
    if (!entry.value("ok", false)) {
      any_error = true;
    } else if (!entry.value("switched", false)) {
      any_not_switched = true;
    }
  }
  if (any_error) {
    return kExitError;
  }
  return any_not_switched ? kExitNotSwitched : kExitOk;
}

int run_check_gradient(const std::string& config_path, int trials, double step,
                       double gamma) {
  int code = kExitOk;
  ProblemPtr problem = load_problem(config_path, code);
  if (!problem) {
    return code;
  }

  double err_smooth = 0.0;
  if (swc_check_gradient(problem.get(), 0.0, trials, step, &err_smooth) !=
      SWC_OK) {
    return fail("check-gradient");
  }
  double err_gamma = 0.0;
  if (swc_check_gradient(problem.get(), gamma, trials, step, &err_gamma) !=
      SWC_OK) {
    return fail("check-gradient");
  }
  std::printf("max relative error (gamma = 0)    %.3e\n", err_smooth);
  std::printf("max relative error (gamma = %g)   %.3e\n", gamma, err_gamma);
  const bool ok = err_smooth <= 1e-6 && err_gamma <= 1e-5;
  std::printf("gradient check       %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitError;
}

int run_oracle(const std::string& config_path) {
  int code = kExitOk;
  ProblemPtr problem = load_problem(config_path, code);
  if (!problem) {
    return code;
  }
  char* report = nullptr;
  if (swc_oracle_compare(problem.get(), &report) != SWC_OK) {
    return fail("oracle");
  }
  const std::string text = take_string(report);
  std::fputs(text.c_str(), stdout);
  return nlohmann::json::parse(text).value("solver_dominates", false)
             ? kExitOk
             : kExitError;
}

int run_check_switching_pc(const std::string& config_path) {
  int code = kExitOk;
  ProblemPtr problem = load_problem(config_path, code);
  if (!problem) {
    return code;
  }
  char* report = nullptr;
  if (swc_check_switching_pc(problem.get(), &report) != SWC_OK) {
    return fail("check-switching-pc");
  }
  const std::string text = take_string(report);
  std::fputs(text.c_str(), stdout);
  return nlohmann::json::parse(text).value("within_tolerance", false)
             ? kExitOk
             : kExitNotSwitched;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switching-penalized optimal control of the heat equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(swc_version()));

  std::string config_path;
  std::string out_dir;
  std::string parameter = "eps";
  std::vector<double> values;
  int trials = 10;
  double step = 1e-5;
  double gamma = 10.0;

  auto* solve = app.add_subcommand("solve", "Run the homotopy solver");
  solve->add_option("config", config_path, "JSON problem configuration")
      ->required();
  solve->add_option("-o,--output", out_dir, "Artifact output directory");

  auto* sweep = app.add_subcommand("sweep", "Solve for a list of parameter values");
  sweep->add_option("config", config_path)->required();
  sweep->add_option("--param", parameter, "alpha or eps")->required();
  sweep->add_option("--values", values, "Comma separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--output", out_dir, "Artifact output directory");

  auto* grad = app.add_subcommand("check-gradient",
                                  "Finite-difference gradient verification");
  grad->add_option("config", config_path)->required();
  grad->add_option("--trials", trials);
  grad->add_option("--step", step);
  grad->add_option("--gamma", gamma, "gamma for the regularized check");

  auto* oracle = app.add_subcommand(
      "oracle", "Exhaustive enumeration oracle vs. the solver");
  oracle->add_option("config", config_path)->required();

  auto* pc = app.add_subcommand("check-switching-pc",
                                "Exact-switching check (piecewise constant)");
  pc->add_option("config", config_path)->required();

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    return run_solve(config_path, out_dir);
  }
  if (sweep->parsed()) {
    return run_sweep(config_path, parameter, values, out_dir);
  }
  if (grad->parsed()) {
    return run_check_gradient(config_path, trials, step, gamma);
  }
  if (oracle->parsed()) {
    return run_oracle(config_path);
  }
  if (pc->parsed()) {
    return run_check_switching_pc(config_path);
  }
  return kExitError;
}
