#include "switchctrl/operators.hpp"

#include <array>

namespace swc {

namespace {

using Triplet = Eigen::Triplet<double>;

void add_mass_entries(const SpaceMesh& mesh, int tri,
                      std::vector<Triplet>& out) {
  const auto v = mesh.triangles.col(tri);
  const double a = mesh.area(tri);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.emplace_back(v[i], v[j], a / 12.0 * (i == j ? 2.0 : 1.0));
    }
  }
}

}  // namespace

SpatialOperators assemble_operators(const SpaceMesh& mesh,
                                    const std::vector<Region>& control_regions,
                                    const Region& obs_region,
                                    double control_scale) {
  const int n = mesh.num_nodes();
  SpatialOperators ops;
  ops.control_scale = control_scale;

  std::vector<Triplet> mass_t, stiff_t, obs_t;
  mass_t.reserve(9 * mesh.num_triangles());
  stiff_t.reserve(9 * mesh.num_triangles());

  ops.control_loads.assign(control_regions.size(),
                           Eigen::VectorXd::Zero(n));

  for (int tri = 0; tri < mesh.num_triangles(); ++tri) {
    const auto v = mesh.triangles.col(tri);
    const double a = mesh.area(tri);
    const Eigen::Vector2d c = mesh.centroid(tri);

    add_mass_entries(mesh, tri, mass_t);
    if (obs_region.contains(c)) {
      add_mass_entries(mesh, tri, obs_t);
    }

    // grad phi_i = (b_i, c_i) / (2A) with the usual cyclic differences.
    const Eigen::Vector2d p0 = mesh.nodes.col(v[0]);
    const Eigen::Vector2d p1 = mesh.nodes.col(v[1]);
    const Eigen::Vector2d p2 = mesh.nodes.col(v[2]);
    const std::array<double, 3> b = {p1.y() - p2.y(), p2.y() - p0.y(),
                                     p0.y() - p1.y()};
    const std::array<double, 3> d = {p2.x() - p1.x(), p0.x() - p2.x(),
                                     p1.x() - p0.x()};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        stiff_t.emplace_back(v[i], v[j],
                             (b[i] * b[j] + d[i] * d[j]) / (4.0 * a));
      }
    }

    for (std::size_t r = 0; r < control_regions.size(); ++r) {
      if (control_regions[r].contains(c)) {
        for (int i = 0; i < 3; ++i) {
          ops.control_loads[r][v[i]] += control_scale * a / 3.0;
        }
      }
    }
  }

  ops.mass.resize(n, n);
  ops.mass.setFromTriplets(mass_t.begin(), mass_t.end());
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(stiff_t.begin(), stiff_t.end());
  ops.obs_mass.resize(n, n);
  ops.obs_mass.setFromTriplets(obs_t.begin(), obs_t.end());
  return ops;
}

}  // namespace swc
