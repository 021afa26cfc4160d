#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "varsep/fe1d.hpp"
#include "varsep/fe2d.hpp"

using namespace varsep;

TEST_CASE("mass matrix stencil") {
  Grid1D g(0.0, 1.0, 2);
  const Matrix M = assemble_mass_1d(g);
  const double h = 0.5;
  CHECK(M(0, 0) == doctest::Approx(h / 3.0).epsilon(1e-14));
  CHECK(M(1, 1) == doctest::Approx(2.0 * h / 3.0).epsilon(1e-14));
  CHECK(M(2, 2) == doctest::Approx(h / 3.0).epsilon(1e-14));
  CHECK(M(0, 1) == doctest::Approx(h / 6.0).epsilon(1e-14));
  CHECK(M(1, 2) == doctest::Approx(h / 6.0).epsilon(1e-14));
  CHECK(M(0, 2) == doctest::Approx(0.0).epsilon(1e-15));

  // Partition of unity: entries sum to the interval length.
  Grid1D g2(0.0, 2.0, 4);
  const Matrix M2 = assemble_mass_1d(g2);
  CHECK(M2.sum() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(M2(2, 3) == doctest::Approx(2.0 * 0.5 / 12.0).epsilon(1e-14));  // h/6 with h = 0.5
}

TEST_CASE("stiffness matrix stencil") {
  Grid1D g(0.0, 1.0, 2);
  const Matrix K = assemble_stiffness_1d(g);
  CHECK(K(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(K(1, 1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(K(2, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(K(0, 1) == doctest::Approx(-2.0).epsilon(1e-14));

  Grid1D g2(0.0, 3.0, 7);
  const Matrix K2 = assemble_stiffness_1d(g2);
  Vector linear = g2.nodes();
  const Vector Kl = K2 * linear;
  for (std::size_t i = 1; i + 1 < g2.n_nodes(); ++i) {
    CHECK(K2.row(static_cast<Eigen::Index>(i)).sum() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(Kl(static_cast<Eigen::Index>(i)) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("convection matrix stencil") {
  Grid1D g(0.0, 1.0, 2);
  const Matrix C = assemble_convection_1d(g);
  CHECK(C(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(C(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(C(1, 2) == doctest::Approx(0.5).epsilon(1e-14));

  // C + C^T integrates (uv)' : only the boundary terms survive.
  Grid1D g2(0.0, 1.0, 6);
  const Matrix C2 = assemble_convection_1d(g2);
  const Matrix S = C2 + C2.transpose();
  for (Eigen::Index i = 0; i < S.rows(); ++i)
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
      const bool boundary = (i == 0 || i + 1 == S.rows()) && std::abs(i - j) <= 1;
      if (!boundary) CHECK(S(i, j) == doctest::Approx(0.0).epsilon(1e-13));
    }

  const Vector c = Vector::Constant(static_cast<Eigen::Index>(g2.n_nodes()), 3.0);
  const Vector Cc = C2 * c;
  for (std::size_t i = 1; i + 1 < g2.n_nodes(); ++i)
    CHECK(Cc(static_cast<Eigen::Index>(i)) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("weighted mass and load") {
  Grid1D g(0.0, 1.0, 5);
  const Matrix Mw = assemble_weighted_mass_1d(g, ScalarFunction1D::constant(1.0));
  CHECK((Mw - assemble_mass_1d(g)).norm() <= 1e-13);

  // Linear weight: entries sum to int_0^1 q dq = 1/2.
  const Matrix Mq = assemble_weighted_mass_1d(g, ScalarFunction1D::polynomial({0.0, 1.0}));
  CHECK(Mq.sum() == doctest::Approx(0.5).epsilon(1e-13));

  // Load with g = 1 sums to the interval length.
  const Vector f = assemble_load_1d(g, ScalarFunction1D::constant(1.0));
  CHECK(f.sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("interpolation helpers") {
  Grid1D g(0.0, 2.0, 4);
  const auto lin = ScalarFunction1D::polynomial({1.0, 2.0});  // 1 + 2q
  const Vector nodal = interpolate_nodal(g, lin);
  CHECK(nodal(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nodal(4) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(eval_p1(g, nodal, 0.75) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(eval_p1(g, nodal, 2.0) == doctest::Approx(5.0).epsilon(1e-13));
}

namespace {

ProblemSpec poisson_manufactured() {
  ProblemSpec p;
  p.x0 = 0.0;
  p.x1 = 1.0;
  p.y0 = 0.0;
  p.y1 = 1.0;
  p.mu = 1.0;
  // f = 2 pi^2 sin(pi x) sin(pi y) so that u = sin(pi x) sin(pi y).
  p.f.terms.push_back({ScalarFunction1D::sine(2.0 * M_PI * M_PI, M_PI, 0.0),
                       ScalarFunction1D::sine(1.0, M_PI, 0.0), std::nullopt});
  return p;
}

Field2D exact_sine_field(const Grid2D& grid) {
  Field2D f(grid);
  for (std::size_t ix = 0; ix < grid.x.n_nodes(); ++ix)
    for (std::size_t iy = 0; iy < grid.y.n_nodes(); ++iy)
      f.at(ix, iy) = std::sin(M_PI * grid.x.node(ix)) * std::sin(M_PI * grid.y.node(iy));
  return f;
}

}  // namespace

TEST_CASE("fe2d zero data gives zero field") {
  ProblemSpec p;  // f empty, all-homogeneous Dirichlet
  const Grid2D grid{Grid1D(0.0, 1.0, 8), Grid1D(0.0, 1.0, 8)};
  const auto res = fe2d_solve(p, grid);
  CHECK(res.field.values.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("fe2d manufactured-solution convergence rate") {
  const ProblemSpec p = poisson_manufactured();
  double errors[2];
  std::size_t grids[2] = {16, 32};
  for (int i = 0; i < 2; ++i) {
    const Grid2D grid{Grid1D(0.0, 1.0, grids[i]), Grid1D(0.0, 1.0, grids[i])};
    const auto res = fe2d_solve(p, grid);
    errors[i] = relative_l2_error(res.field, exact_sine_field(grid));
  }
  const double rate = std::log2(errors[0] / errors[1]);
  CHECK(rate > 1.8);
  CHECK(rate < 2.2);
}

TEST_CASE("fe2d mesh Peclet warning") {
  ProblemSpec p = poisson_manufactured();
  p.mu = 1e-3;
  p.bx = 5.0;
  const Grid2D grid{Grid1D(0.0, 1.0, 10), Grid1D(0.0, 1.0, 10)};
  const auto res = fe2d_solve(p, grid);
  REQUIRE(!res.warnings.empty());
  CHECK(res.warnings.front().find("Peclet") != std::string::npos);
}

TEST_CASE("relative_l2_error examples") {
  const Grid2D grid{Grid1D(0.0, 1.0, 12), Grid1D(0.0, 1.0, 12)};
  const Field2D ref = exact_sine_field(grid);
  CHECK(relative_l2_error(ref, ref) == doctest::Approx(0.0).epsilon(1e-15));

  Field2D twice = ref;
  twice.values *= 2.0;
  CHECK(relative_l2_error(twice, ref) == doctest::Approx(1.0).epsilon(1e-12));

  // Constant perturbation of a unit-norm reference shifts the error by
  // exactly the constant.
  Field2D unit = ref;
  unit.values /= l2_norm(ref);
  Field2D shifted = unit;
  const double eps = 1e-3;
  shifted.values.array() += eps;
  CHECK(relative_l2_error(shifted, unit) == doctest::Approx(eps).epsilon(1e-9));

  Field2D zero(grid);
  CHECK_THROWS_AS(relative_l2_error(ref, zero), std::domain_error);
}
