#pragma once

#include <vector>

#include <Eigen/Core>

#include "switchctrl/forward.hpp"
#include "switchctrl/mesh.hpp"
#include "switchctrl/operators.hpp"
#include "switchctrl/time_grid.hpp"

namespace swc {

/// Everything the solvers need about one discretized problem instance. Built
/// once and treated as immutable afterwards; all solver entry points take it
/// by const reference.
struct Discretization {
  SpaceMesh mesh;
  SpatialOperators ops;
  TimeGrid grid;
  ControlMode mode = ControlMode::NodalH1;
  std::vector<Eigen::VectorXd> y_target;  ///< nodal target per time node
  Eigen::VectorXd y0;
  GramData gram;
  Eigen::VectorXd weights;  ///< control pairing weights, length nT

  int control_dim() const { return static_cast<int>(weights.size()); }
};

/// Assembles the Gram data and bundles the pieces.
Discretization make_discretization(SpaceMesh mesh, SpatialOperators ops,
                                   TimeGrid grid, ControlMode mode,
                                   std::vector<Eigen::VectorXd> y_target,
                                   Eigen::VectorXd y0);

}  // namespace swc
