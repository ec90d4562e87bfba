#include "switchctrl/discretization.hpp"

#include <utility>

namespace swc {

Discretization make_discretization(SpaceMesh mesh, SpatialOperators ops,
                                   TimeGrid grid, ControlMode mode,
                                   std::vector<Eigen::VectorXd> y_target,
                                   Eigen::VectorXd y0) {
  Discretization disc;
  disc.gram = assemble_gram(ops, grid, mode, y_target, y0);
  disc.weights = control_weights(grid, mode);
  disc.mesh = std::move(mesh);
  disc.ops = std::move(ops);
  disc.grid = std::move(grid);
  disc.mode = mode;
  disc.y_target = std::move(y_target);
  disc.y0 = std::move(y0);
  return disc;
}

}  // namespace swc
