#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "switchctrl/mesh.hpp"

namespace swc {

/// P1 finite element operators assembled on a SpaceMesh (natural Neumann
/// boundary conditions, exact element integrals).
struct SpatialOperators {
  Eigen::SparseMatrix<double> mass;       ///< M_x, SPD
  Eigen::SparseMatrix<double> stiffness;  ///< A_x, SPSD with constants in the kernel
  Eigen::SparseMatrix<double> obs_mass;   ///< mass restricted to observation triangles
  std::vector<Eigen::VectorXd> control_loads;  ///< b_i with (b_i)_j = scale * int_{w_i} phi_j
  double control_scale = 1.0;
};

SpatialOperators assemble_operators(const SpaceMesh& mesh,
                                    const std::vector<Region>& control_regions,
                                    const Region& obs_region,
                                    double control_scale);

}  // namespace swc
