#include "switchctrl/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace swc {

namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

const char* termination_name(NewtonReport::Termination t) {
  switch (t) {
    case NewtonReport::Termination::Absolute:
      return "absolute";
    case NewtonReport::Termination::Relative:
      return "relative";
    case NewtonReport::Termination::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

json record_to_json(const HomotopyRecord& rec) {
  json j;
  j["phase"] = rec.phase;
  j["beta"] = rec.beta;
  j["gamma"] = rec.gamma;
  j["iterations"] = rec.newton.iterations;
  j["converged"] = rec.newton.converged;
  j["termination"] = termination_name(rec.newton.termination);
  j["residual_history"] = rec.newton.residual_norms;
  j["residual"] = rec.newton.residual_norms.back();
  j["sigma_sw"] = rec.sigma_sw;
  j["objective"] = rec.objective;
  j["my_gap"] = rec.my_gap;
  j["u_inf"] = rec.u_inf;
  j["active_upper"] = rec.active_upper;
  j["active_lower"] = rec.active_lower;
  return j;
}

// Coefficient value of a piecewise-constant component seen as a step
// function sampled at node j (last interval extends to t = T).
double step_sample(const Eigen::Matrix2Xd& values, int comp, int j) {
  const int nT = static_cast<int>(values.cols());
  return values(comp, std::min(j, nT - 1));
}

}  // namespace

std::string format_double(double v) { return json(v).dump(); }

std::string report_to_json(const ProblemConfig& config,
                           const SolveReport& report) {
  const TimeGrid grid = build_time_grid(config.T, config.M);
  const bool nodal = config.mode == ControlMode::NodalH1;

  json j;
  j["mode"] = nodal ? "h1" : "piecewise_constant";
  j["objective"] = report.objective;
  j["switch_count"] = report.switch_count;
  j["switching_error"] = report.switching_error;
  j["switching_error_interval"] = report.switching_error_interval;
  j["beta_max"] = report.beta_max;
  j["residual_norm"] = report.residual_norm;
  j["switched"] = report.switched;

  std::vector<double> t(report.u.size());
  for (int k = 0; k < report.u.size(); ++k) {
    t[k] = nodal ? grid.nodes[k] : 0.5 * (grid.nodes[k] + grid.nodes[k + 1]);
  }
  j["t"] = t;
  j["u1"] = std::vector<double>(report.u.values.row(0).begin(),
                                report.u.values.row(0).end());
  j["u2"] = std::vector<double>(report.u.values.row(1).begin(),
                                report.u.values.row(1).end());
  j["q"] = std::vector<double>(report.q.q.begin(), report.q.q.end());

  j["homotopy"] = json::array();
  for (const auto& rec : report.log) {
    j["homotopy"].push_back(record_to_json(rec));
  }
  return j.dump(2) + "\n";
}

std::string controls_csv(const ProblemConfig& config,
                         const SolveReport& report) {
  const TimeGrid grid = build_time_grid(config.T, config.M);
  const bool nodal = config.mode == ControlMode::NodalH1;

  std::ostringstream out;
  out << "t,u1,u2,q,u1u2\n";
  for (int k = 0; k < grid.M; ++k) {
    double u1, u2, qv;
    if (nodal) {
      u1 = report.u.values(0, k);
      u2 = report.u.values(1, k);
      qv = report.q.q[k];
    } else {
      u1 = step_sample(report.u.values, 0, k);
      u2 = step_sample(report.u.values, 1, k);
      qv = report.q.q[std::min<int>(k, static_cast<int>(report.q.q.size()) - 1)];
    }
    out << format_double(grid.nodes[k]) << ',' << format_double(u1) << ','
        << format_double(u2) << ',' << format_double(qv) << ','
        << format_double(u1 * u2) << '\n';
  }
  return out.str();
}

std::string homotopy_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "phase,beta,gamma,iterations,converged,residual,sigma_sw,objective\n";
  for (const auto& rec : report.log) {
    out << rec.phase << ',' << format_double(rec.beta) << ','
        << format_double(rec.gamma) << ',' << rec.newton.iterations << ','
        << (rec.newton.converged ? 1 : 0) << ','
        << format_double(rec.newton.residual_norms.back()) << ','
        << format_double(rec.sigma_sw) << ',' << format_double(rec.objective)
        << '\n';
  }
  return out.str();
}

namespace {

std::string state_csv(const ProblemConfig& config, const SolveReport& report) {
  const Discretization disc = [&] {
    // Snapshots only need the forward solve; reuse the full builder for the
    // exact same assembly path.
    return build_discretization(config);
  }();
  const StateTrajectory traj =
      solve_forward(disc.ops, disc.grid, report.u, disc.y0);

  std::ostringstream out;
  out << "t";
  for (int i = 0; i < disc.mesh.num_nodes(); ++i) {
    out << ",y" << i;
  }
  out << '\n';
  for (int k = 0; k < disc.grid.M; ++k) {
    out << format_double(disc.grid.nodes[k]);
    for (int i = 0; i < disc.mesh.num_nodes(); ++i) {
      out << ',' << format_double(traj.y[k][i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

void write_artifacts(const ProblemConfig& config, const SolveReport& report,
                     const std::string& dir) {
  const std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  write_file(base / "report.json", report_to_json(config, report));
  write_file(base / "controls.csv", controls_csv(config, report));
  write_file(base / "homotopy.csv", homotopy_csv(report));
  if (config.write_state) {
    write_file(base / "state.csv", state_csv(config, report));
  }
}

std::string sweep_summary_csv(const std::vector<SweepEntry>& entries) {
  std::ostringstream out;
  out << "value,objective,switch_count,switching_error,residual,beta_max,status\n";
  for (const auto& e : entries) {
    out << format_double(e.value) << ',';
    if (e.ok) {
      out << format_double(e.report.objective) << ','
          << e.report.switch_count << ','
          << format_double(e.report.switching_error) << ','
          << format_double(e.report.residual_norm) << ','
          << format_double(e.report.beta_max) << ','
          << (e.report.switched ? "ok" : "not_switched");
    } else {
      std::string msg = e.error;
      for (auto& ch : msg) {
        if (ch == ',' || ch == '\n') {
          ch = ';';
        }
      }
      out << ",,,,,\"error: " << msg << '"';
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_summary_json(const std::string& parameter,
                               const std::vector<SweepEntry>& entries) {
  json j;
  j["parameter"] = parameter;
  j["entries"] = json::array();
  for (const auto& e : entries) {
    json ej;
    ej["value"] = e.value;
    ej["ok"] = e.ok;
    if (e.ok) {
      ej["objective"] = e.report.objective;
      ej["switch_count"] = e.report.switch_count;
      ej["switching_error"] = e.report.switching_error;
      ej["residual"] = e.report.residual_norm;
      ej["beta_max"] = e.report.beta_max;
      ej["switched"] = e.report.switched;
    } else {
      ej["error"] = e.error;
    }
    j["entries"].push_back(ej);
  }
  return j.dump(2) + "\n";
}

void write_sweep_artifacts(const ProblemConfig& config,
                           const std::string& parameter,
                           const std::vector<SweepEntry>& entries,
                           const std::string& dir) {
  const std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  write_file(base / "summary.csv", sweep_summary_csv(entries));
  for (const auto& e : entries) {
    if (!e.ok) {
      continue;
    }
    ProblemConfig c = config;
    (parameter == "alpha" ? c.alpha : c.eps) = e.value;
    write_artifacts(c, e.report,
                    (base / (parameter + "_" + format_double(e.value))).string());
  }
}

}  // namespace swc
