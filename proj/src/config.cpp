#include "switchctrl/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace swc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      fail("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) {
    fail("'" + key + "' in " + where + " must be a number");
  }
  return j.at(key).get<double>();
}

Region parse_region(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) {
    fail("region in " + where + " must be an object with a 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  std::string name = j.value("name", type);
  if (type == "all") {
    reject_unknown_keys(j, {"type", "name"}, where);
    return Region::all(name);
  }
  if (type == "halfplane") {
    reject_unknown_keys(j, {"type", "name", "axis", "op", "value"}, where);
    const int axis = j.value("axis", 0);
    if (axis != 0 && axis != 1) {
      fail("region axis in " + where + " must be 0 or 1");
    }
    const std::string op = j.value("op", "leq");
    Region::Cmp cmp;
    if (op == "leq") {
      cmp = Region::Cmp::Leq;
    } else if (op == "lt") {
      cmp = Region::Cmp::Lt;
    } else if (op == "geq") {
      cmp = Region::Cmp::Geq;
    } else if (op == "gt") {
      cmp = Region::Cmp::Gt;
    } else {
      fail("region op in " + where + " must be one of leq|lt|geq|gt");
    }
    return Region::half_plane(axis, cmp, get_number(j, "value", where), name);
  }
  if (type == "box") {
    reject_unknown_keys(j, {"type", "name", "min", "max"}, where);
    const auto lo = j.at("min").get<std::vector<double>>();
    const auto hi = j.at("max").get<std::vector<double>>();
    if (lo.size() != 2 || hi.size() != 2) {
      fail("box region in " + where + " needs 2D 'min' and 'max'");
    }
    return Region::box(Eigen::Vector2d(lo[0], lo[1]),
                       Eigen::Vector2d(hi[0], hi[1]), name);
  }
  fail("unknown region type '" + type + "' in " + where);
}

json region_to_json(const Region& r) {
  json j;
  j["name"] = r.name;
  switch (r.kind) {
    case Region::Kind::All:
      j["type"] = "all";
      break;
    case Region::Kind::HalfPlane: {
      j["type"] = "halfplane";
      j["axis"] = r.axis;
      const char* op = "leq";
      if (r.cmp == Region::Cmp::Lt) op = "lt";
      if (r.cmp == Region::Cmp::Geq) op = "geq";
      if (r.cmp == Region::Cmp::Gt) op = "gt";
      j["op"] = op;
      j["value"] = r.value;
      break;
    }
    case Region::Kind::Box:
      j["type"] = "box";
      j["min"] = {r.lo.x(), r.lo.y()};
      j["max"] = {r.hi.x(), r.hi.y()};
      break;
  }
  return j;
}

TargetSpec parse_target(const json& j) {
  TargetSpec t;
  if (!j.is_object() || !j.contains("type")) {
    fail("'target' must be an object with a 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") {
    reject_unknown_keys(j, {"type"}, "target");
    t.kind = TargetSpec::Kind::Zero;
    return t;
  }
  if (type == "generating_control") {
    reject_unknown_keys(j, {"type", "formula", "amplitudes", "values"}, "target");
    t.kind = TargetSpec::Kind::GeneratingControl;
    t.formula = j.value("formula", "example2");
    if (t.formula != "example2" && t.formula != "constant") {
      fail("unknown generating-control formula '" + t.formula + "'");
    }
    const char* amp_key = j.contains("values") ? "values" : "amplitudes";
    if (j.contains(amp_key)) {
      const auto a = j.at(amp_key).get<std::vector<double>>();
      if (a.size() != 2) {
        fail("'target." + std::string(amp_key) + "' needs two entries");
      }
      t.amp1 = a[0];
      t.amp2 = a[1];
    }
    return t;
  }
  if (type == "explicit") {
    reject_unknown_keys(j, {"type", "data"}, "target");
    t.kind = TargetSpec::Kind::Explicit;
    t.data = j.at("data").get<std::vector<std::vector<double>>>();
    return t;
  }
  fail("unknown target type '" + type + "'");
}

json target_to_json(const TargetSpec& t) {
  json j;
  switch (t.kind) {
    case TargetSpec::Kind::Zero:
      j["type"] = "zero";
      break;
    case TargetSpec::Kind::GeneratingControl:
      j["type"] = "generating_control";
      j["formula"] = t.formula;
      j["amplitudes"] = {t.amp1, t.amp2};
      break;
    case TargetSpec::Kind::Explicit:
      j["type"] = "explicit";
      j["data"] = t.data;
      break;
  }
  return j;
}

void parse_schedule(const json& j, HomotopySchedule& s) {
  reject_unknown_keys(j,
                      {"beta_min", "gamma_min", "gamma_max", "factor",
                       "sw_rel_tol", "beta_cap", "newton", "newton_derivative"},
                      "schedule");
  if (j.contains("beta_min")) s.beta_min = get_number(j, "beta_min", "schedule");
  if (j.contains("gamma_min")) s.gamma_min = get_number(j, "gamma_min", "schedule");
  if (j.contains("gamma_max")) s.gamma_max = get_number(j, "gamma_max", "schedule");
  if (j.contains("factor")) s.factor = get_number(j, "factor", "schedule");
  if (j.contains("sw_rel_tol")) s.sw_rel_tol = get_number(j, "sw_rel_tol", "schedule");
  if (j.contains("beta_cap")) s.beta_cap = get_number(j, "beta_cap", "schedule");
  if (j.contains("newton")) {
    const json& n = j.at("newton");
    reject_unknown_keys(n, {"max_iter", "rel_tol", "abs_tol"}, "schedule.newton");
    if (n.contains("max_iter")) s.newton.max_iter = n.at("max_iter").get<int>();
    if (n.contains("rel_tol")) s.newton.rel_tol = get_number(n, "rel_tol", "newton");
    if (n.contains("abs_tol")) s.newton.abs_tol = get_number(n, "abs_tol", "newton");
  }
  if (j.contains("newton_derivative")) {
    const std::string d = j.at("newton_derivative").get<std::string>();
    if (d == "standard") {
      s.derivative = NewtonDerivative::Standard;
    } else if (d == "paper") {
      s.derivative = NewtonDerivative::PaperVariant;
    } else {
      fail("schedule.newton_derivative must be 'standard' or 'paper'");
    }
  }
}

}  // namespace

ProblemConfig example2_preset() {
  ProblemConfig c;
  c.alpha = 1e-6;
  c.T = 10.0;
  c.M = 101;
  c.nx = 16;
  c.mode = ControlMode::NodalH1;
  c.control_scale = 0.1;
  c.control_regions = {
      Region::half_plane(0, Region::Cmp::Leq, 0.0, "omega1"),
      Region::half_plane(0, Region::Cmp::Gt, 0.0, "omega2")};
  c.obs_region = Region::all("omega_obs");
  c.target.kind = TargetSpec::Kind::GeneratingControl;
  c.target.formula = "example2";
  c.target.amp1 = 20.0;
  c.target.amp2 = 10.0;
  c.y0_value = 0.0;
  c.schedule.beta_min = 1e-5;
  c.schedule.gamma_min = 1e-9;
  c.schedule.gamma_max = 1e4;
  return c;
}

ProblemConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) {
    fail("config root must be a JSON object");
  }
  reject_unknown_keys(
      j,
      {"preset", "alpha", "eps", "T", "M", "nx", "mode", "control_scale",
       "regions", "target", "y0", "schedule", "oracle", "artifacts"},
      "config");

  ProblemConfig c;
  bool from_preset = false;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset != "example2") {
      fail("unknown preset '" + preset + "'");
    }
    c = example2_preset();
    from_preset = true;
  }

  if (j.contains("alpha")) c.alpha = get_number(j, "alpha", "config");
  if (!from_preset && !j.contains("alpha")) {
    fail("'alpha' is required without a preset");
  }

  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "h1") {
      c.mode = ControlMode::NodalH1;
    } else if (m == "piecewise_constant") {
      c.mode = ControlMode::PiecewiseConstant;
    } else {
      fail("mode must be 'h1' or 'piecewise_constant'");
    }
  }

  if (j.contains("eps")) {
    c.eps = get_number(j, "eps", "config");
  } else if (c.mode == ControlMode::NodalH1) {
    fail("'eps' is required in h1 mode (eps > 0)");
  } else {
    c.eps = 0.0;
  }

  if (j.contains("T")) c.T = get_number(j, "T", "config");
  if (j.contains("M")) c.M = j.at("M").get<int>();
  if (j.contains("nx")) c.nx = j.at("nx").get<int>();
  if (j.contains("control_scale")) {
    c.control_scale = get_number(j, "control_scale", "config");
  }

  if (j.contains("regions")) {
    const json& r = j.at("regions");
    reject_unknown_keys(r, {"control", "observation"}, "regions");
    if (r.contains("control")) {
      const json& cr = r.at("control");
      if (!cr.is_array()) {
        fail("'regions.control' must be an array");
      }
      c.control_regions.clear();
      for (const auto& rj : cr) {
        c.control_regions.push_back(parse_region(rj, "regions.control"));
      }
    }
    if (r.contains("observation")) {
      c.obs_region = parse_region(r.at("observation"), "regions.observation");
    }
  }
  if (c.control_regions.empty() && !from_preset) {
    fail("'regions.control' is required without a preset");
  }

  if (j.contains("target")) c.target = parse_target(j.at("target"));
  if (j.contains("y0")) {
    const json& y = j.at("y0");
    if (y.is_number()) {
      c.y0_value = y.get<double>();
      c.y0_data.clear();
    } else if (y.is_array()) {
      c.y0_data = y.get<std::vector<double>>();
    } else {
      fail("'y0' must be a number or an array of nodal values");
    }
  }

  if (j.contains("schedule")) parse_schedule(j.at("schedule"), c.schedule);

  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    reject_unknown_keys(o, {"grid"}, "oracle");
    if (o.contains("grid")) {
      c.oracle_grid = o.at("grid").get<std::vector<double>>();
    }
  }
  if (j.contains("artifacts")) {
    const json& a = j.at("artifacts");
    reject_unknown_keys(a, {"state"}, "artifacts");
    c.write_state = a.value("state", false);
  }

  validate_config(c);
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail("cannot open config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_json(const ProblemConfig& c) {
  json j;
  j["alpha"] = c.alpha;
  j["eps"] = c.eps;
  j["T"] = c.T;
  j["M"] = c.M;
  j["nx"] = c.nx;
  j["mode"] = c.mode == ControlMode::NodalH1 ? "h1" : "piecewise_constant";
  j["control_scale"] = c.control_scale;
  json regions;
  regions["control"] = json::array();
  for (const auto& r : c.control_regions) {
    regions["control"].push_back(region_to_json(r));
  }
  regions["observation"] = region_to_json(c.obs_region);
  j["regions"] = regions;
  j["target"] = target_to_json(c.target);
  if (c.y0_data.empty()) {
    j["y0"] = c.y0_value;
  } else {
    j["y0"] = c.y0_data;
  }
  json sched;
  sched["beta_min"] = c.schedule.beta_min;
  sched["gamma_min"] = c.schedule.gamma_min;
  sched["gamma_max"] = c.schedule.gamma_max;
  sched["factor"] = c.schedule.factor;
  sched["sw_rel_tol"] = c.schedule.sw_rel_tol;
  sched["beta_cap"] = c.schedule.beta_cap;
  sched["newton"] = {{"max_iter", c.schedule.newton.max_iter},
                     {"rel_tol", c.schedule.newton.rel_tol},
                     {"abs_tol", c.schedule.newton.abs_tol}};
  sched["newton_derivative"] =
      c.schedule.derivative == NewtonDerivative::Standard ? "standard" : "paper";
  j["schedule"] = sched;
  if (!c.oracle_grid.empty()) {
    j["oracle"] = {{"grid", c.oracle_grid}};
  }
  j["artifacts"] = {{"state", c.write_state}};
  return j.dump(2);
}

void validate_config(const ProblemConfig& c) {
  if (!(c.alpha > 0.0)) fail("alpha must be positive");
  if (c.eps < 0.0) fail("eps must be nonnegative");
  if (c.mode == ControlMode::NodalH1 && c.eps == 0.0) {
    fail("eps = 0 requires piecewise-constant mode");
  }
  if (c.mode == ControlMode::PiecewiseConstant && c.eps != 0.0) {
    fail("piecewise-constant mode requires eps = 0");
  }
  if (!(c.T > 0.0)) fail("T must be positive");
  if (c.M < 2) fail("M must be at least 2");
  if (c.nx < 2 || c.nx % 2 != 0) fail("nx must be even and at least 2");
  if (!std::isfinite(c.control_scale)) fail("control_scale must be finite");
  if (c.control_regions.size() != 2) {
    fail("exactly two control regions are required");
  }
  if (!(c.schedule.beta_min > 0.0)) fail("schedule.beta_min must be positive");
  if (!(c.schedule.gamma_min > 0.0)) fail("schedule.gamma_min must be positive");
  if (c.schedule.gamma_max < c.schedule.gamma_min) {
    fail("schedule.gamma_max must be >= gamma_min");
  }
  if (!(c.schedule.factor > 1.0)) fail("schedule.factor must exceed 1");
  if (c.schedule.sw_rel_tol < 0.0) fail("schedule.sw_rel_tol must be >= 0");
  if (c.schedule.beta_cap < c.schedule.beta_min) {
    fail("schedule.beta_cap must be >= beta_min");
  }
  if (c.schedule.newton.max_iter < 0) fail("newton.max_iter must be >= 0");
  if (!(c.schedule.newton.rel_tol > 0.0) || !(c.schedule.newton.abs_tol > 0.0)) {
    fail("newton tolerances must be positive");
  }
  const int n = (c.nx + 1) * (c.nx + 1);
  if (!c.y0_data.empty() && static_cast<int>(c.y0_data.size()) != n) {
    fail("y0 nodal data must have (nx+1)^2 entries");
  }
  if (c.target.kind == TargetSpec::Kind::Explicit) {
    if (static_cast<int>(c.target.data.size()) != c.M) {
      fail("explicit target needs one nodal vector per time node");
    }
    for (const auto& row : c.target.data) {
      if (static_cast<int>(row.size()) != n) {
        fail("explicit target rows must have (nx+1)^2 entries");
      }
    }
  }
}

ControlTrajectory generating_control_samples(const TargetSpec& target,
                                             const TimeGrid& grid,
                                             ControlMode mode) {
  auto eval = [&](double t) -> Eigen::Vector2d {
    if (target.formula == "constant") {
      return {target.amp1, target.amp2};
    }
    const double s1 = std::sin(2.0 * M_PI * t / grid.T);
    const double s2 = std::cos(1.4 * M_PI * t / grid.T);
    return {target.amp1 * s1 * s1 * s1 * s1, target.amp2 * s2 * s2 * s2 * s2};
  };

  ControlTrajectory u = ControlTrajectory::zero(mode, grid.M);
  for (int j = 0; j < u.size(); ++j) {
    // Interval values sample the right endpoint, which is exactly what the
    // nodal forward map reads; both modes then generate the same target.
    const double t =
        mode == ControlMode::NodalH1 ? grid.nodes[j] : grid.nodes[j + 1];
    u.values.col(j) = eval(t);
  }
  return u;
}

Discretization build_discretization(const ProblemConfig& c) {
  validate_config(c);

  SpaceMesh mesh = build_mesh(c.nx);
  SpatialOperators ops =
      assemble_operators(mesh, c.control_regions, c.obs_region, c.control_scale);
  TimeGrid grid = build_time_grid(c.T, c.M);

  const int n = mesh.num_nodes();
  Eigen::VectorXd y0;
  if (c.y0_data.empty()) {
    y0 = Eigen::VectorXd::Constant(n, c.y0_value);
  } else {
    y0 = Eigen::Map<const Eigen::VectorXd>(c.y0_data.data(), n);
  }

  std::vector<Eigen::VectorXd> y_target(grid.M, Eigen::VectorXd::Zero(n));
  switch (c.target.kind) {
    case TargetSpec::Kind::Zero:
      break;
    case TargetSpec::Kind::GeneratingControl: {
      const ControlTrajectory ud =
          generating_control_samples(c.target, grid, c.mode);
      y_target = solve_forward(ops, grid, ud, y0).y;
      break;
    }
    case TargetSpec::Kind::Explicit:
      for (int k = 0; k < grid.M; ++k) {
        y_target[k] =
            Eigen::Map<const Eigen::VectorXd>(c.target.data[k].data(), n);
      }
      break;
  }

  return make_discretization(std::move(mesh), std::move(ops), std::move(grid),
                             c.mode, std::move(y_target), std::move(y0));
}

}  // namespace swc
