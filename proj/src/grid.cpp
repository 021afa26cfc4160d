#include "varsep/grid.hpp"

#include <algorithm>
#include <cmath>

namespace varsep {

Grid1D::Grid1D(double a_, double b_, std::size_t n_elems_) : a(a_), b(b_), n_elems(n_elems_) {
  if (!(a < b)) throw std::invalid_argument("Grid1D: left endpoint must be below right endpoint");
  if (n_elems == 0) throw std::invalid_argument("Grid1D: element count must be >= 1");
}

Vector Grid1D::nodes() const {
  return Vector::LinSpaced(static_cast<Eigen::Index>(n_nodes()), a, b);
}

std::pair<std::size_t, double> Grid1D::locate(double x) const {
  const double tol = 1e-12 * (b - a);
  if (x < a - tol || x > b + tol) throw std::invalid_argument("Grid1D::locate: point outside grid");
  const double s = (x - a) / h();
  auto e = static_cast<std::size_t>(std::floor(s));
  e = std::min(e, n_elems - 1);
  double t = s - static_cast<double>(e);
  t = std::clamp(t, 0.0, 1.0);
  return {e, t};
}

}  // namespace varsep
