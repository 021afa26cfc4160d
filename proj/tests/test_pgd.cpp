#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "varsep/fe1d.hpp"
#include "varsep/fe2d.hpp"
#include "varsep/linalg.hpp"
#include "varsep/pgd.hpp"

using namespace varsep;

namespace {

// Unit-square Poisson problem with the separable forcing
// f = sin(pi x) * sqrt(2) sin(pi y), whose solution is f / (2 pi^2).
ProblemSpec rank1_problem() {
  ProblemSpec p;
  p.f.terms.push_back({ScalarFunction1D::sine(1.0, M_PI, 0.0),
                       ScalarFunction1D::sine(std::sqrt(2.0), M_PI, 0.0), std::nullopt});
  return p;
}

Field2D exact_rank1_field(const Grid2D& grid) {
  Field2D f(grid);
  for (std::size_t ix = 0; ix < grid.x.n_nodes(); ++ix)
    for (std::size_t iy = 0; iy < grid.y.n_nodes(); ++iy)
      f.at(ix, iy) = std::sin(M_PI * grid.x.node(ix)) * std::sqrt(2.0) *
                     std::sin(M_PI * grid.y.node(iy)) / (2.0 * M_PI * M_PI);
  return f;
}

Vector interior_sine(const Grid1D& g) {
  Vector v(static_cast<Eigen::Index>(g.n_nodes()));
  for (std::size_t i = 0; i < g.n_nodes(); ++i)
    v(static_cast<Eigen::Index>(i)) = std::sin(M_PI * g.node(i));
  v(0) = 0.0;
  v(v.size() - 1) = 0.0;
  return v;
}

}  // namespace

TEST_CASE("pgd_setup preconditions") {
  Grid1D gx(0.0, 1.0, 8), gy(0.0, 1.0, 8);
  ProblemSpec parametric = rank1_problem();
  parametric.mu = ParamInterval{1.0, 5.0};
  CHECK_THROWS_AS(pgd_setup(parametric, gx, gy), std::invalid_argument);

  ProblemSpec lateral = rank1_problem();
  lateral.bc.top = BoundaryCondition::dirichlet(ScalarFunction1D::constant(1.0));
  CHECK_THROWS_AS(pgd_setup(lateral, gx, gy), std::invalid_argument);

  const auto ops = pgd_setup(rank1_problem(), gx, gy);
  CHECK(ops.x_constrained.size() == 2);
  CHECK(ops.y_constrained.size() == 2);
  CHECK(!ops.lift.has_value());
}

TEST_CASE("x half-step against an independent 1D solve") {
  Grid1D gx(0.0, 1.0, 24), gy(0.0, 1.0, 24);
  const auto ops = pgd_setup(rank1_problem(), gx, gy);
  const Vector uy = interior_sine(gy);

  const Vector ux = ads_halfstep_x(ops, uy, {});

  // Independent assembly of the reduced x-problem with fe1d matrices.
  const Matrix Kx = assemble_stiffness_1d(gx);
  const Matrix Mx = assemble_mass_1d(gx);
  const Matrix My = assemble_mass_1d(gy);
  const Matrix Ky = assemble_stiffness_1d(gy);
  const double wM = (uy.transpose() * My * uy).value();
  const double wK = (uy.transpose() * Ky * uy).value();
  Matrix A = wM * Kx + wK * Mx;
  const Vector fy = assemble_load_1d(gy, ScalarFunction1D::sine(std::sqrt(2.0), M_PI, 0.0));
  Vector rhs = uy.dot(fy) * assemble_load_1d(gx, ScalarFunction1D::sine(1.0, M_PI, 0.0));
  const auto n = A.rows();
  for (Eigen::Index c : {Eigen::Index(0), n - 1}) {
    A.row(c).setZero();
    A.col(c).setZero();
    A(c, c) = 1.0;
    rhs(c) = 0.0;
  }
  const Vector oracle = solve_dense(A, rhs);
  CHECK((ux - oracle).cwiseAbs().maxCoeff() <= 1e-10);

  // Degenerate frozen factor is rejected.
  CHECK_THROWS(ads_halfstep_x(ops, Vector::Zero(uy.size()), {}));
}

TEST_CASE("half-steps are linear in the forcing terms") {
  Grid1D gx(0.0, 1.0, 16), gy(0.0, 1.0, 16);
  ProblemSpec two = rank1_problem();
  two.f.terms.push_back({ScalarFunction1D::gaussian(3.0, 0.4, 0.2),
                         ScalarFunction1D::bubble(1.0), std::nullopt});
  ProblemSpec only_second;
  only_second.f.terms.push_back(two.f.terms[1]);

  const auto ops_both = pgd_setup(two, gx, gy);
  const auto ops_a = pgd_setup(rank1_problem(), gx, gy);
  const auto ops_b = pgd_setup(only_second, gx, gy);
  const Vector uy = interior_sine(gy);
  const Vector sum = ads_halfstep_x(ops_a, uy, {}) + ads_halfstep_x(ops_b, uy, {});
  CHECK((ads_halfstep_x(ops_both, uy, {}) - sum).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("enrichment on the rank-1 problem converges fast") {
  Grid1D gx(0.0, 1.0, 40), gy(0.0, 1.0, 40);
  const auto ops = pgd_setup(rank1_problem(), gx, gy);
  EnrichmentRecord record;
  const ModePair mode = pgd_enrich(ops, {}, 1e-10, 20, record);
  CHECK(record.fp_iterations <= 10);
  CHECK(record.final_increment <= 1e-10);
  // Gauge: the y-factor leaves with unit discrete L2 norm.
  const Matrix My = assemble_mass_1d(gy);
  CHECK(std::sqrt((mode.uy.transpose() * My * mode.uy).value()) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("enrichment with zero data returns the zero mode") {
  Grid1D gx(0.0, 1.0, 10), gy(0.0, 1.0, 10);
  ProblemSpec zero;  // no forcing, homogeneous data
  const auto ops = pgd_setup(zero, gx, gy);
  EnrichmentRecord record;
  const ModePair mode = pgd_enrich(ops, {}, 1e-6, 10, record);
  CHECK(mode.ux.norm() == doctest::Approx(0.0));
  CHECK(record.fp_iterations == 1);
}

TEST_CASE("rank-1 analytic solution recovered at O(h^2)") {
  Grid1D gx(0.0, 1.0, 60), gy(0.0, 1.0, 60);
  PgdOptions opts;
  opts.tol_fp = 1e-10;
  opts.fixed_modes = 1;
  const auto sol = pgd_solve(rank1_problem(), gx, gy, opts);
  REQUIRE(sol.modes.size() == 1);
  const Grid2D grid2d{gx, gy};
  const double err = relative_l2_error(pgd_evaluate(sol, grid2d), exact_rank1_field(grid2d));
  CHECK(err <= 2e-3);
}

TEST_CASE("greedy loop stops at mode 2 on the rank-1 problem") {
  Grid1D gx(0.0, 1.0, 40), gy(0.0, 1.0, 40);
  PgdOptions opts;
  opts.tol_e = 1e-4;
  opts.tol_fp = 1e-8;
  opts.max_modes = 10;
  const auto sol = pgd_solve(rank1_problem(), gx, gy, opts);
  CHECK(sol.modes.size() == 2);
  REQUIRE(sol.report.steps.size() == 2);
  CHECK(sol.report.steps[1].enrichment_ratio <= opts.tol_e);
}

TEST_CASE("gauge invariance of the evaluated field") {
  Grid1D gx(0.0, 1.0, 30), gy(0.0, 1.0, 30);
  PgdOptions opts;
  opts.tol_fp = 1e-10;
  opts.fixed_modes = 1;
  auto sol = pgd_solve(rank1_problem(), gx, gy, opts);
  const Grid2D grid2d{gx, gy};
  const Field2D before = pgd_evaluate(sol, grid2d);
  const double c = 7.0;
  sol.modes[0].ux *= c;
  sol.modes[0].uy /= c;
  const Field2D after = pgd_evaluate(sol, grid2d);
  CHECK((after.values - before.values).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("evaluation basics") {
  Grid1D gx(0.0, 1.0, 4), gy(0.0, 1.0, 4);
  PGDSolution sol;
  sol.x_grid = gx;
  sol.y_grid = gy;
  const Grid2D grid2d{gx, gy};
  CHECK(pgd_evaluate(sol, grid2d).values.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  ModePair hat;
  hat.ux = Vector::Zero(5);
  hat.uy = Vector::Zero(5);
  hat.ux(2) = 1.0;
  hat.uy(2) = 1.0;
  sol.modes.push_back(hat);
  const Field2D f = pgd_evaluate(sol, grid2d);
  CHECK(f.at(2, 2) == doctest::Approx(1.0));
  CHECK(f.at(0, 0) == doctest::Approx(0.0));
  CHECK(f.at(4, 1) == doctest::Approx(0.0));
}

TEST_CASE("rank-1 norms match a direct 2D computation") {
  Grid1D gx(0.0, 1.0, 9), gy(0.0, 2.0, 7);
  const Matrix Mx = assemble_mass_1d(gx);
  const Matrix My = assemble_mass_1d(gy);
  Vector a(static_cast<Eigen::Index>(gx.n_nodes()));
  Vector b(static_cast<Eigen::Index>(gy.n_nodes()));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = 0.3 + 0.1 * static_cast<double>(i);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 1.0 - 0.05 * static_cast<double>(i);

  // Oracle: assemble the tensor-product field and take its bilinear L2 norm.
  Field2D field({gx, gy});
  for (std::size_t ix = 0; ix < gx.n_nodes(); ++ix)
    for (std::size_t iy = 0; iy < gy.n_nodes(); ++iy)
      field.at(ix, iy) = a(static_cast<Eigen::Index>(ix)) * b(static_cast<Eigen::Index>(iy));
  CHECK(rank1_l2_norm(Mx, My, a, b) == doctest::Approx(l2_norm(field)).epsilon(1e-12));

  CHECK(rank1_diff_l2_norm(Mx, My, a, b, a, b) == doctest::Approx(0.0).epsilon(1e-12));
  const Vector a2 = 2.0 * a;
  CHECK(rank1_diff_l2_norm(Mx, My, a2, b, a, b) ==
        doctest::Approx(rank1_l2_norm(Mx, My, a, b)).epsilon(1e-12));
}

TEST_CASE("nonhomogeneous inlet handled through the separable lift") {
  // Channel flow with unit forcing and parabolic inlet data.
  ProblemSpec p;
  p.x1 = 3.0;
  p.mu = 1.0;
  p.bx = 2.5;
  p.f.terms.push_back(
      {ScalarFunction1D::constant(1.0), ScalarFunction1D::constant(1.0), std::nullopt});
  p.bc.left = BoundaryCondition::dirichlet(ScalarFunction1D::bubble(1.0));
  p.bc.right = BoundaryCondition::neumann0();

  Grid1D gx(0.0, 3.0, 60), gy(0.0, 1.0, 30);
  PgdOptions opts;
  opts.tol_fp = 1e-2;
  opts.fixed_modes = 2;
  const auto sol = pgd_solve(p, gx, gy, opts);
  REQUIRE(sol.lift.has_value());

  const Grid2D grid2d{gx, gy};
  const Field2D field = pgd_evaluate(sol, grid2d);
  // The inlet trace is reproduced exactly by the lift (modes vanish there).
  for (std::size_t iy = 0; iy < gy.n_nodes(); ++iy) {
    const double y = gy.node(iy);
    CHECK(field.at(0, iy) == doctest::Approx(y * (1.0 - y)).epsilon(1e-10));
  }
  // And the reduced solution tracks the full FE reference.
  const Grid2D ref_grid{Grid1D(0.0, 3.0, 120), Grid1D(0.0, 1.0, 60)};
  const Field2D ref = fe2d_solve(p, ref_grid).field;
  const double err = relative_l2_error(pgd_evaluate(sol, ref_grid), ref);
  CHECK(err < 0.1);
}
