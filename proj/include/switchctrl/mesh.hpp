#pragma once

#include <string>

#include <Eigen/Core>

namespace swc {

/// Uniform triangulation of the square (-1,1)^2. Every grid cell is split
/// along its lower-left/upper-right diagonal. The subdivision count must be
/// even so that the line x1 = 0 is a union of mesh edges and half-plane
/// control regions are resolved exactly.
struct SpaceMesh {
  int nx = 0;                                       ///< subdivisions per axis
  Eigen::Matrix2Xd nodes;                           ///< 2 x (nx+1)^2
  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles;  ///< 3 x 2*nx^2

  int num_nodes() const { return static_cast<int>(nodes.cols()); }
  int num_triangles() const { return static_cast<int>(triangles.cols()); }

  Eigen::Vector2d centroid(int tri) const;
  double area(int tri) const;  ///< signed area, positive by construction
};

/// Builds the uniform mesh. Throws std::invalid_argument for nx < 2 or odd nx.
SpaceMesh build_mesh(int nx);

/// Axis-aligned membership predicate evaluated at triangle centroids; a region
/// is therefore always a union of whole triangles.
struct Region {
  enum class Kind { All, HalfPlane, Box };
  enum class Cmp { Leq, Lt, Geq, Gt };

  Kind kind = Kind::All;
  std::string name = "all";
  int axis = 0;        // half-plane coordinate index (0 or 1)
  Cmp cmp = Cmp::Leq;  // half-plane comparison against value
  double value = 0.0;
  Eigen::Vector2d lo = Eigen::Vector2d::Zero();  // box corners, closed
  Eigen::Vector2d hi = Eigen::Vector2d::Zero();

  static Region all(std::string name = "all");
  static Region half_plane(int axis, Cmp cmp, double value, std::string name);
  static Region box(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                    std::string name);

  bool contains(const Eigen::Vector2d& p) const;
};

}  // namespace swc
