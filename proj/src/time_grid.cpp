#include "switchctrl/time_grid.hpp"

#include <stdexcept>
#include <vector>

namespace swc {

TimeGrid build_time_grid(double T, int M) {
  if (!(T > 0.0)) {
    throw std::invalid_argument("build_time_grid: T must be positive");
  }
  if (M < 2) {
    throw std::invalid_argument("build_time_grid: need at least 2 time nodes");
  }

  TimeGrid grid;
  grid.T = T;
  grid.M = M;
  grid.tau = T / (M - 1);

  grid.nodes.resize(M);
  for (int j = 0; j < M; ++j) {
    grid.nodes[j] = T * j / (M - 1);
  }

  grid.weights = Eigen::VectorXd::Constant(M, grid.tau);
  grid.weights[0] = 0.5 * grid.tau;
  grid.weights[M - 1] = 0.5 * grid.tau;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * M);
  const double inv_tau = 1.0 / grid.tau;
  for (int e = 0; e < M - 1; ++e) {
    trip.emplace_back(e, e, inv_tau);
    trip.emplace_back(e + 1, e + 1, inv_tau);
    trip.emplace_back(e, e + 1, -inv_tau);
    trip.emplace_back(e + 1, e, -inv_tau);
  }
  grid.laplacian.resize(M, M);
  grid.laplacian.setFromTriplets(trip.begin(), trip.end());
  return grid;
}

int control_size(ControlMode mode, int M) {
  return mode == ControlMode::NodalH1 ? M : M - 1;
}

Eigen::VectorXd control_weights(const TimeGrid& grid, ControlMode mode) {
  if (mode == ControlMode::NodalH1) {
    return grid.weights;
  }
  return Eigen::VectorXd::Constant(grid.M - 1, grid.tau);
}

ControlTrajectory ControlTrajectory::zero(ControlMode mode, int M) {
  ControlTrajectory u;
  u.mode = mode;
  u.values = Eigen::Matrix2Xd::Zero(2, control_size(mode, M));
  return u;
}

DualTrajectory DualTrajectory::zero(ControlMode mode, int M) {
  DualTrajectory d;
  d.q = Eigen::VectorXd::Zero(control_size(mode, M));
  return d;
}

}  // namespace swc
