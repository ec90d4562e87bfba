#include "switchctrl/mesh.hpp"

#include <stdexcept>
#include <utility>

namespace swc {

Eigen::Vector2d SpaceMesh::centroid(int tri) const {
  const auto v = triangles.col(tri);
  return (nodes.col(v[0]) + nodes.col(v[1]) + nodes.col(v[2])) / 3.0;
}

double SpaceMesh::area(int tri) const {
  const auto v = triangles.col(tri);
  const Eigen::Vector2d e1 = nodes.col(v[1]) - nodes.col(v[0]);
  const Eigen::Vector2d e2 = nodes.col(v[2]) - nodes.col(v[0]);
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

SpaceMesh build_mesh(int nx) {
  if (nx < 2 || nx % 2 != 0) {
    throw std::invalid_argument(
        "build_mesh: nx must be even and >= 2 so control regions split along "
        "x1 = 0 are unions of whole triangles");
  }

  SpaceMesh mesh;
  mesh.nx = nx;

  const int side = nx + 1;
  mesh.nodes.resize(2, side * side);
  for (int iy = 0; iy < side; ++iy) {
    for (int ix = 0; ix < side; ++ix) {
      // (2*i - nx)/nx places interior grid lines (x = 0 in particular) exactly.
      mesh.nodes.col(iy * side + ix) << (2.0 * ix - nx) / nx,
          (2.0 * iy - nx) / nx;
    }
  }

  mesh.triangles.resize(3, 2 * nx * nx);
  int t = 0;
  for (int iy = 0; iy < nx; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int v00 = iy * side + ix;
      const int v10 = v00 + 1;
      const int v01 = v00 + side;
      const int v11 = v01 + 1;
      mesh.triangles.col(t++) << v00, v10, v11;
      mesh.triangles.col(t++) << v00, v11, v01;
    }
  }
  return mesh;
}

Region Region::all(std::string name) {
  Region r;
  r.kind = Kind::All;
  r.name = std::move(name);
  return r;
}

Region Region::half_plane(int axis, Cmp cmp, double value, std::string name) {
  Region r;
  r.kind = Kind::HalfPlane;
  r.axis = axis;
  r.cmp = cmp;
  r.value = value;
  r.name = std::move(name);
  return r;
}

Region Region::box(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                   std::string name) {
  Region r;
  r.kind = Kind::Box;
  r.lo = lo;
  r.hi = hi;
  r.name = std::move(name);
  return r;
}

bool Region::contains(const Eigen::Vector2d& p) const {
  switch (kind) {
    case Kind::All:
      return true;
    case Kind::HalfPlane: {
      const double c = p[axis];
      switch (cmp) {
        case Cmp::Leq:
          return c <= value;
        case Cmp::Lt:
          return c < value;
        case Cmp::Geq:
          return c >= value;
        case Cmp::Gt:
          return c > value;
      }
      return false;
    }
    case Kind::Box:
      return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() &&
             p.y() <= hi.y();
  }
  return false;
}

}  // namespace swc
