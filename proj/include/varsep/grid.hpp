#pragma once

#include <cstddef>
#include <stdexcept>

#include "varsep/types.hpp"

namespace varsep {

/// Uniform 1D grid on [a,b] with n_elems P1 elements and n_elems+1 nodes.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  std::size_t n_elems = 1;

  Grid1D() = default;
  Grid1D(double a_, double b_, std::size_t n_elems_);

  std::size_t n_nodes() const { return n_elems + 1; }
  double h() const { return (b - a) / static_cast<double>(n_elems); }
  double node(std::size_t i) const { return a + h() * static_cast<double>(i); }
  Vector nodes() const;

  /// Element index and local coordinate in [0,1] for a point x in [a,b].
  std::pair<std::size_t, double> locate(double x) const;
};

struct Grid2D {
  Grid1D x;
  Grid1D y;
};

/// Nodal scalar field on a structured 2D grid, x-major ordering:
/// values[ix * (ny+1) + iy].
struct Field2D {
  Grid2D grid;
  Vector values;

  Field2D() = default;
  explicit Field2D(const Grid2D& g)
      : grid(g), values(Vector::Zero(static_cast<Eigen::Index>(g.x.n_nodes() * g.y.n_nodes()))) {}

  std::size_t index(std::size_t ix, std::size_t iy) const { return ix * grid.y.n_nodes() + iy; }
  double& at(std::size_t ix, std::size_t iy) { return values(static_cast<Eigen::Index>(index(ix, iy))); }
  double at(std::size_t ix, std::size_t iy) const { return values(static_cast<Eigen::Index>(index(ix, iy))); }
};

}  // namespace varsep
