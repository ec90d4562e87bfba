#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "switchctrl/homotopy.hpp"
#include "switchctrl/io.hpp"
#include "switchctrl/objective.hpp"

using namespace swc;

namespace {

ProblemConfig small_config() {
  ProblemConfig c = example2_preset();
  c.nx = 4;
  c.M = 11;
  c.eps = 1e-4;
  c.target.amp1 = 5.0;
  c.target.amp2 = 2.5;
  c.schedule.gamma_max = 1e3;
  return c;
}

void check_phase_ordering(const SolveReport& report) {
  REQUIRE(!report.log.empty());
  int last_phase = 0;
  double last_beta = 0.0;
  double last_gamma = 0.0;
  for (const auto& rec : report.log) {
    CHECK(rec.phase >= last_phase);
    if (rec.phase == last_phase) {
      if (rec.phase == 1) {
        CHECK(rec.gamma >= last_gamma);
        CHECK(rec.beta == last_beta);
      } else if (rec.phase == 2) {
        CHECK(rec.beta >= last_beta);
        CHECK(rec.gamma == last_gamma);
      } else if (rec.phase == 3) {
        CHECK(rec.gamma <= last_gamma);
        CHECK(rec.beta == last_beta);
      }
    }
    last_phase = rec.phase;
    last_beta = rec.beta;
    last_gamma = rec.gamma;
  }
  CHECK(report.log.front().phase == 0);
  CHECK(report.log.back().phase == 3);
}

}  // namespace

TEST_CASE("zero problem stays at zero and needs no penalty") {
  ProblemConfig c = small_config();
  c.target.kind = TargetSpec::Kind::Zero;
  const SolveReport report = run_homotopy(c);

  CHECK(report.u.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(report.switch_count == 0);
  CHECK(report.switching_error == 0.0);
  CHECK(report.beta_max == c.schedule.beta_min);
  CHECK(report.switched);
  CHECK(report.objective == 0.0);
  check_phase_ordering(report);
}

TEST_CASE("degenerate gamma schedule gives one node in phases 1 and 3") {
  ProblemConfig c = small_config();
  c.schedule.gamma_min = 1e2;
  c.schedule.gamma_max = 1e2;
  const SolveReport report = run_homotopy(c);

  int phase1 = 0;
  int phase3 = 0;
  for (const auto& rec : report.log) {
    phase1 += rec.phase == 1 ? 1 : 0;
    phase3 += rec.phase == 3 ? 1 : 0;
  }
  CHECK(phase1 == 1);
  CHECK(phase3 == 1);
  check_phase_ordering(report);
}

TEST_CASE("benchmark instance switches and satisfies the solve invariants") {
  const ProblemConfig c = small_config();
  const Discretization disc = build_discretization(c);
  const SolveReport report = run_homotopy(disc, c.alpha, c.eps, c.schedule);

  check_phase_ordering(report);
  CHECK(report.switched);
  CHECK(report.beta_max > c.alpha);

  const double u_inf = std::max(report.u.values.row(0).cwiseAbs().maxCoeff(),
                                report.u.values.row(1).cwiseAbs().maxCoeff());
  CHECK(report.switching_error <= c.schedule.sw_rel_tol * u_inf);

  // Prop 2.2-style bound: the computed control beats the zero control.
  ObjectiveParams p;
  p.alpha = c.alpha;
  p.eps = c.eps;
  p.beta = report.beta_max;
  const double j_zero =
      eval_J(disc, ControlTrajectory::zero(disc.mode, disc.grid.M), p);
  CHECK(report.objective <= j_zero * (1.0 + 1e-12));

  // Report consistency with the objective module.
  CHECK(report.objective == eval_J(disc, report.u, p));
  CHECK(report.switching_error == switching_error(report.u));
  CHECK(report.switch_count == count_switching_points(report.u));

  // beta_max is minimal on the tested grid.
  std::vector<const HomotopyRecord*> phase2;
  for (const auto& rec : report.log) {
    if (rec.phase == 2) {
      phase2.push_back(&rec);
    }
  }
  REQUIRE(!phase2.empty());
  CHECK(phase2.back()->beta == report.beta_max);
  if (phase2.size() > 1) {
    const auto* previous = phase2[phase2.size() - 2];
    CHECK(previous->sigma_sw > c.schedule.sw_rel_tol * previous->u_inf);
  }

  // The logged reformulation gap is the scaled complementarity residual, so
  // gamma * gap can never exceed the final residual norm of the node.
  for (const auto& rec : report.log) {
    if (rec.gamma > 0.0) {
      CHECK(rec.my_gap * rec.gamma <=
            rec.newton.residual_norms.back() * (1.0 + 1e-10) + 1e-300);
    }
  }
  // At the final node the control switches, so the reformulation holds at the
  // tolerance of the acceptance criterion.
  const auto& last = report.log.back();
  CHECK(last.my_gap <= 1e-7 * (1.0 + last.u_inf * last.u_inf));

  // Warm starts keep phase 3 within the iteration budget.
  int phase3_iterations = 0;
  int phase3_nodes = 0;
  for (const auto& rec : report.log) {
    if (rec.phase == 3) {
      phase3_iterations += rec.newton.iterations;
      ++phase3_nodes;
    }
  }
  CHECK(phase3_iterations <= c.schedule.newton.max_iter * phase3_nodes);
}

TEST_CASE("runs are deterministic") {
  const ProblemConfig c = small_config();
  const SolveReport a = run_homotopy(c);
  const SolveReport b = run_homotopy(c);
  CHECK(report_to_json(c, a) == report_to_json(c, b));
}

TEST_CASE("beta cap produces a not-switched report instead of an error") {
  ProblemConfig c = small_config();
  // An unreachable switching tolerance exhausts the beta grid.
  c.schedule.sw_rel_tol = 0.0;
  c.schedule.beta_cap = 1e-3;
  const SolveReport report = run_homotopy(c);
  CHECK(!report.switched);
  CHECK(report.beta_max == doctest::Approx(1e-3).epsilon(1e-12));
  check_phase_ordering(report);
}

TEST_CASE("sweep") {
  const ProblemConfig c = small_config();

  SUBCASE("single value matches a direct run") {
    const auto entries = sweep(c, "eps", {c.eps});
    REQUIRE(entries.size() == 1);
    REQUIRE(entries[0].ok);
    const SolveReport direct = run_homotopy(c);
    CHECK(report_to_json(c, entries[0].report) == report_to_json(c, direct));
  }

  SUBCASE("duplicate values give identical reports") {
    const auto entries = sweep(c, "eps", {1e-3, 1e-3});
    REQUIRE(entries.size() == 2);
    REQUIRE(entries[0].ok);
    REQUIRE(entries[1].ok);
    ProblemConfig ce = c;
    ce.eps = 1e-3;
    CHECK(report_to_json(ce, entries[0].report) ==
          report_to_json(ce, entries[1].report));
  }

  SUBCASE("per-entry failures are recorded and the sweep continues") {
    const auto entries = sweep(c, "eps", {1e-3, -1.0, 1e-4});
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].ok);
    CHECK(!entries[1].ok);
    CHECK(!entries[1].error.empty());
    CHECK(entries[2].ok);
  }

  SUBCASE("unknown parameter is rejected up front") {
    CHECK_THROWS_AS(sweep(c, "beta", {1.0}), std::invalid_argument);
  }

  SUBCASE("switch counts do not decrease as eps decreases") {
    const auto entries = sweep(c, "eps", {1e-2, 1e-3, 1e-4});
    REQUIRE(entries.size() == 3);
    int previous = -1;
    for (const auto& e : entries) {
      REQUIRE(e.ok);
      CHECK(e.report.switch_count >= previous);
      previous = e.report.switch_count;
    }
  }
}
