#include "varsep/fe1d.hpp"

#include "varsep/quadrature.hpp"

namespace varsep {

Matrix assemble_mass_1d(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n_nodes());
  Matrix M = Matrix::Zero(n, n);
  const double h = grid.h();
  for (std::size_t e = 0; e < grid.n_elems; ++e) {
    const auto i = static_cast<Eigen::Index>(e);
    M(i, i) += h / 3.0;
    M(i, i + 1) += h / 6.0;
    M(i + 1, i) += h / 6.0;
    M(i + 1, i + 1) += h / 3.0;
  }
  return M;
}

Matrix assemble_stiffness_1d(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n_nodes());
  Matrix K = Matrix::Zero(n, n);
  const double ih = 1.0 / grid.h();
  for (std::size_t e = 0; e < grid.n_elems; ++e) {
    const auto i = static_cast<Eigen::Index>(e);
    K(i, i) += ih;
    K(i, i + 1) -= ih;
    K(i + 1, i) -= ih;
    K(i + 1, i + 1) += ih;
  }
  return K;
}

Matrix assemble_convection_1d(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n_nodes());
  Matrix C = Matrix::Zero(n, n);
  // Local matrix int theta_l' theta_i over one element: rows i (test),
  // columns l (trial); [[-1/2, 1/2], [-1/2, 1/2]].
  for (std::size_t e = 0; e < grid.n_elems; ++e) {
    const auto i = static_cast<Eigen::Index>(e);
    C(i, i) -= 0.5;
    C(i, i + 1) += 0.5;
    C(i + 1, i) -= 0.5;
    C(i + 1, i + 1) += 0.5;
  }
  return C;
}

Matrix assemble_weighted_mass_1d(const Grid1D& grid, const ScalarFunction1D& w,
                                 std::size_t points) {
  const auto n = static_cast<Eigen::Index>(grid.n_nodes());
  Matrix M = Matrix::Zero(n, n);
  const QuadratureRule rule = gauss_legendre(points);
  for (std::size_t e = 0; e < grid.n_elems; ++e) {
    const auto i = static_cast<Eigen::Index>(e);
    const double xa = grid.node(e), xb = grid.node(e + 1);
    const auto q = map_to_interval(rule, xa, xb);
    for (Eigen::Index g = 0; g < q.points.size(); ++g) {
      const double x = q.points(g);
      const double t = (x - xa) / grid.h();
      const double wv = q.weights(g) * w(x);
      const double phi0 = 1.0 - t, phi1 = t;
      M(i, i) += wv * phi0 * phi0;
      M(i, i + 1) += wv * phi0 * phi1;
      M(i + 1, i) += wv * phi1 * phi0;
      M(i + 1, i + 1) += wv * phi1 * phi1;
    }
  }
  return M;
}

Vector assemble_load_1d(const Grid1D& grid, const ScalarFunction1D& g, std::size_t points) {
  const auto n = static_cast<Eigen::Index>(grid.n_nodes());
  Vector f = Vector::Zero(n);
  const QuadratureRule rule = gauss_legendre(points);
  for (std::size_t e = 0; e < grid.n_elems; ++e) {
    const auto i = static_cast<Eigen::Index>(e);
    const double xa = grid.node(e), xb = grid.node(e + 1);
    const auto q = map_to_interval(rule, xa, xb);
    for (Eigen::Index k = 0; k < q.points.size(); ++k) {
      const double x = q.points(k);
      const double t = (x - xa) / grid.h();
      const double gv = q.weights(k) * g(x);
      f(i) += gv * (1.0 - t);
      f(i + 1) += gv * t;
    }
  }
  return f;
}

Vector interpolate_nodal(const Grid1D& grid, const ScalarFunction1D& g) {
  const auto n = static_cast<Eigen::Index>(grid.n_nodes());
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(grid.node(static_cast<std::size_t>(i)));
  return v;
}

double eval_p1(const Grid1D& grid, const Vector& nodal, double x) {
  const auto [e, t] = grid.locate(x);
  const auto i = static_cast<Eigen::Index>(e);
  return (1.0 - t) * nodal(i) + t * nodal(i + 1);
}

}  // namespace varsep
