#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "switchctrl/discretization.hpp"
#include "switchctrl/ssn.hpp"

namespace swc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NewtonBudget {
  int max_iter = 5;
  double rel_tol = 1e-6;
  double abs_tol = 1e-7;
};

/// Continuation parameters for the three-phase (gamma-up, beta-up, gamma-down)
/// driver.
struct HomotopySchedule {
  double beta_min = 1e-5;
  double gamma_min = 1e-9;
  double gamma_max = 1e2;
  double factor = 10.0;
  double sw_rel_tol = 1e-10;  ///< relative switching tolerance for beta_max
  double beta_cap = 1e6;      ///< safety bound; exceeding it flags "not switched"
  NewtonBudget newton;
  NewtonDerivative derivative = NewtonDerivative::Standard;
  /// Continuation floor used by the exact-switching check: phase 2 keeps
  /// increasing beta until it exceeds this value even once switched.
  double min_beta_max = 0.0;
};

struct TargetSpec {
  enum class Kind { Zero, GeneratingControl, Explicit };
  Kind kind = Kind::GeneratingControl;
  /// "example2": u_d = (a1 sin^4(2 pi t/T), a2 cos^4(1.4 pi t/T));
  /// "constant": u_d = (a1, a2).
  std::string formula = "example2";
  double amp1 = 20.0;
  double amp2 = 10.0;
  std::vector<std::vector<double>> data;  ///< explicit nodal target per node
};

/// Fully resolved problem description; load_config applies presets and
/// defaults and validates cross-field consistency.
struct ProblemConfig {
  double alpha = 1e-6;
  double eps = 0.0;
  double T = 10.0;
  int M = 101;
  int nx = 16;
  ControlMode mode = ControlMode::NodalH1;
  double control_scale = 1.0;
  std::vector<Region> control_regions;
  Region obs_region = Region::all();
  TargetSpec target;
  double y0_value = 0.0;
  std::vector<double> y0_data;  ///< non-empty: nodal initial data
  HomotopySchedule schedule;
  std::vector<double> oracle_grid;  ///< admissible values for the enumeration oracle
  bool write_state = false;
};

/// The distributed-control benchmark preset: half-plane control regions split
/// at x1 = 0, scaled loads, full observation, sin^4/cos^4 generating control.
/// eps is left unset and must be supplied by the caller.
ProblemConfig example2_preset();

ProblemConfig load_config(const std::string& path);
ProblemConfig parse_config_text(const std::string& text);

/// Canonical JSON form (all fields explicit); parses back to an equal config.
std::string config_to_json(const ProblemConfig& config);

/// Throws ConfigError naming the violated invariant.
void validate_config(const ProblemConfig& config);

/// Samples the generating control at the values the forward map reads, so the
/// generated target trajectory agrees between the two control modes.
ControlTrajectory generating_control_samples(const TargetSpec& target,
                                             const TimeGrid& grid,
                                             ControlMode mode);

/// Builds mesh, operators, grid, target and Gram data for a valid config.
Discretization build_discretization(const ProblemConfig& config);

}  // namespace swc
