#pragma once

#include <string>
#include <vector>

#include "switchctrl/config.hpp"
#include "switchctrl/objective.hpp"
#include "switchctrl/ssn.hpp"

namespace swc {

/// One continuation node. Phase 0 is the smooth initial solve at gamma = 0,
/// phases 1/2/3 are gamma-up, beta-up and gamma-down.
struct HomotopyRecord {
  int phase = 0;
  double beta = 0.0;
  double gamma = 0.0;
  NewtonReport newton;
  double sigma_sw = 0.0;
  double objective = 0.0;  ///< J_beta(u) at the node's beta, gamma excluded
  double my_gap = 0.0;     ///< max-node violation of u1 u2 = (max+min)/gamma
  double u_inf = 0.0;      ///< max(||u_1||_inf, ||u_2||_inf)
  int active_upper = 0;
  int active_lower = 0;
};

struct SolveReport {
  ControlTrajectory u;
  DualTrajectory q;
  double objective = 0.0;  ///< J_beta_max(u), gamma excluded
  int switch_count = 0;
  double switching_error = 0.0;
  double switching_error_interval = 0.0;
  double beta_max = 0.0;
  double residual_norm = 0.0;
  bool switched = false;  ///< false when beta_cap was hit before the tolerance
  std::vector<HomotopyRecord> log;
};

/// Runs the three-phase continuation, warm-starting the semismooth Newton
/// solver at every node. Throws SingularNewtonError if a Newton matrix is
/// singular (the log up to that point is lost to the caller by design; the
/// CLI reports the failure).
SolveReport run_homotopy(const Discretization& disc, double alpha, double eps,
                         const HomotopySchedule& schedule);
SolveReport run_homotopy(const ProblemConfig& config);

struct SweepEntry {
  double value = 0.0;
  bool ok = false;
  std::string error;
  SolveReport report;
};

/// Independent runs per parameter value, sharing one discretization (the Gram
/// data does not depend on alpha or eps). Per-entry failures are recorded and
/// the sweep continues.
std::vector<SweepEntry> sweep(const ProblemConfig& config,
                              const std::string& parameter,
                              const std::vector<double>& values);

}  // namespace swc
