#include "varsep/pgd_param.hpp"

#include <cmath>

#include "varsep/linalg.hpp"

namespace varsep {

namespace {

Vector solve_with_constraints(const Matrix& A, const Vector& rhs,
                              const std::vector<std::size_t>& constrained) {
  if (constrained.empty()) return solve_dense(A, rhs);
  const auto n = A.rows();
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (std::size_t c : constrained) fixed[c] = 1;
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!fixed[static_cast<std::size_t>(i)]) free.push_back(i);
  const auto nf = static_cast<Eigen::Index>(free.size());
  Matrix Af(nf, nf);
  Vector bf(nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    bf(i) = rhs(free[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < nf; ++j)
      Af(i, j) = A(free[static_cast<std::size_t>(i)], free[static_cast<std::size_t>(j)]);
  }
  const Vector xf = solve_dense(Af, bf);
  Vector x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < nf; ++i) x(free[static_cast<std::size_t>(i)]) = xf(i);
  return x;
}

std::vector<const ModeTriple*> known_terms(const PgdParamOperators& ops,
                                           const std::vector<ModeTriple>& previous) {
  std::vector<const ModeTriple*> known;
  for (const auto& mode : previous) known.push_back(&mode);
  if (ops.lift) known.push_back(&*ops.lift);
  return known;
}

double triple_product_gram(const PgdParamOperators& ops, const ModeTriple& a,
                           const ModeTriple& b) {
  return (a.ux.transpose() * ops.Mx * b.ux).value() *
         (a.uy.transpose() * ops.My * b.uy).value() *
         (a.umu.transpose() * ops.Nmu * b.umu).value();
}

}  // namespace

std::pair<Matrix, Matrix> assemble_param_masses(const Grid1D& mu_grid) {
  if (!(mu_grid.a > 0.0))
    throw std::invalid_argument("assemble_param_masses: parameter interval must be positive");
  // Weight mu is linear, so 3-point Gauss per element is exact.
  const Matrix Mmu =
      assemble_weighted_mass_1d(mu_grid, ScalarFunction1D::polynomial({0.0, 1.0}), 3);
  const Matrix Nmu = assemble_mass_1d(mu_grid);
  return {Mmu, Nmu};
}

PgdParamOperators pgd_param_setup(const ProblemSpec& problem, const Grid1D& x_grid,
                                  const Grid1D& y_grid, const Grid1D& mu_grid) {
  if (!problem.is_parametric())
    throw std::invalid_argument("pgd_param_setup: problem must carry a parameter interval");
  const auto iv = problem.mu_interval();
  if (std::abs(mu_grid.a - iv.mu_min) > 1e-12 || std::abs(mu_grid.b - iv.mu_max) > 1e-12)
    throw std::invalid_argument("pgd_param_setup: mu grid must span the parameter interval");

  PgdParamOperators ops;
  ops.x_grid = x_grid;
  ops.y_grid = y_grid;
  ops.mu_grid = mu_grid;
  ops.Kx = assemble_stiffness_1d(x_grid);
  ops.Mx = assemble_mass_1d(x_grid);
  ops.Cx = assemble_convection_1d(x_grid);
  ops.Ky = assemble_stiffness_1d(y_grid);
  ops.My = assemble_mass_1d(y_grid);
  ops.Cy = assemble_convection_1d(y_grid);
  std::tie(ops.Mmu, ops.Nmu) = assemble_param_masses(mu_grid);
  for (const auto& term : problem.f.terms) {
    ops.fx.push_back(assemble_load_1d(x_grid, term.fx, 5));
    ops.fy.push_back(assemble_load_1d(y_grid, term.fy, 5));
    ops.fmu.push_back(
        assemble_load_1d(mu_grid, term.fmu ? *term.fmu : ScalarFunction1D::constant(1.0), 5));
  }
  auto axis = [](const BoundaryCondition& low, const BoundaryCondition& high,
                 std::size_t n_nodes) {
    std::vector<std::size_t> c;
    if (low.is_dirichlet()) c.push_back(0);
    if (high.is_dirichlet()) c.push_back(n_nodes - 1);
    return c;
  };
  ops.x_constrained = axis(problem.bc.left, problem.bc.right, x_grid.n_nodes());
  ops.y_constrained = axis(problem.bc.bottom, problem.bc.top, y_grid.n_nodes());
  ops.bx = problem.bx;
  ops.by = problem.by;

  for (Side s : {Side::Top, Side::Bottom}) {
    const auto& bc = problem.bc.side(s);
    if (bc.is_dirichlet() && !bc.is_homogeneous_dirichlet())
      throw std::invalid_argument(
          "pgd_param_setup: nonhomogeneous lateral Dirichlet data unsupported");
  }
  const bool left_inhom =
      problem.bc.left.is_dirichlet() && !problem.bc.left.is_homogeneous_dirichlet();
  const bool right_inhom =
      problem.bc.right.is_dirichlet() && !problem.bc.right.is_homogeneous_dirichlet();
  if (left_inhom && right_inhom)
    throw std::invalid_argument(
        "pgd_param_setup: at most one nonhomogeneous Dirichlet side supported");
  if (left_inhom || right_inhom) {
    // mu-independent boundary data: separable triple lift with a constant
    // parameter factor.
    ModeTriple lift;
    lift.ux = Vector::Zero(static_cast<Eigen::Index>(x_grid.n_nodes()));
    lift.ux(left_inhom ? 0 : static_cast<Eigen::Index>(x_grid.n_nodes() - 1)) = 1.0;
    const auto& g = (left_inhom ? problem.bc.left : problem.bc.right).g;
    lift.uy = interpolate_nodal(y_grid, g);
    for (std::size_t c : ops.y_constrained) lift.uy(static_cast<Eigen::Index>(c)) = 0.0;
    lift.umu = Vector::Ones(static_cast<Eigen::Index>(mu_grid.n_nodes()));
    ops.lift = lift;
  }
  return ops;
}

double rank1_triple_norm(const PgdParamOperators& ops, const ModeTriple& t) {
  return std::sqrt(std::max(triple_product_gram(ops, t, t), 0.0));
}

ModeTriple ads_tristep(const PgdParamOperators& ops, const ModeTriple& current,
                       const std::vector<ModeTriple>& previous) {
  const auto known = known_terms(ops, previous);
  ModeTriple next = current;

  // x-step: y- and mu-factors frozen at the previous sweep.
  {
    const Vector& uy = current.uy;
    const Vector& umu = current.umu;
    const double wMmu = (umu.transpose() * ops.Mmu * umu).value();
    const double wNmu = (umu.transpose() * ops.Nmu * umu).value();
    const double wMy = (uy.transpose() * ops.My * uy).value();
    if (!(wMy > 0.0) || !(wNmu > 0.0))
      throw std::runtime_error("ads_tristep: degenerate mode (zero frozen factor)");
    const double wKy = (uy.transpose() * ops.Ky * uy).value();
    const double wCy = (uy.transpose() * ops.Cy * uy).value();

    Matrix A = wMmu * (wMy * ops.Kx + wKy * ops.Mx) +
               wNmu * (ops.bx * wMy * ops.Cx + ops.by * wCy * ops.Mx);
    Vector rhs = Vector::Zero(ops.Kx.rows());
    for (std::size_t r = 0; r < ops.fx.size(); ++r)
      rhs += uy.dot(ops.fy[r]) * umu.dot(ops.fmu[r]) * ops.fx[r];
    for (const ModeTriple* mode : known) {
      const double pMmu = (umu.transpose() * ops.Mmu * mode->umu).value();
      const double pNmu = (umu.transpose() * ops.Nmu * mode->umu).value();
      const double pMy = (uy.transpose() * ops.My * mode->uy).value();
      const double pKy = (uy.transpose() * ops.Ky * mode->uy).value();
      const double pCy = (uy.transpose() * ops.Cy * mode->uy).value();
      rhs -= (pMmu * (pMy * ops.Kx + pKy * ops.Mx) +
              pNmu * (ops.bx * pMy * ops.Cx + ops.by * pCy * ops.Mx)) *
             mode->ux;
    }
    next.ux = solve_with_constraints(A, rhs, ops.x_constrained);
  }
  if (next.ux.norm() == 0.0) {
    next.uy.setZero();
    next.umu.setZero();
    return next;
  }

  // y-step: fresh x-factor, previous mu-factor.
  {
    const Vector& ux = next.ux;
    const Vector& umu = current.umu;
    const double wMmu = (umu.transpose() * ops.Mmu * umu).value();
    const double wNmu = (umu.transpose() * ops.Nmu * umu).value();
    const double wKx = (ux.transpose() * ops.Kx * ux).value();
    const double wMx = (ux.transpose() * ops.Mx * ux).value();
    const double wCx = (ux.transpose() * ops.Cx * ux).value();

    Matrix A = wMmu * (wKx * ops.My + wMx * ops.Ky) +
               wNmu * (ops.bx * wCx * ops.My + ops.by * wMx * ops.Cy);
    Vector rhs = Vector::Zero(ops.Ky.rows());
    for (std::size_t r = 0; r < ops.fy.size(); ++r)
      rhs += ux.dot(ops.fx[r]) * umu.dot(ops.fmu[r]) * ops.fy[r];
    for (const ModeTriple* mode : known) {
      const double pMmu = (umu.transpose() * ops.Mmu * mode->umu).value();
      const double pNmu = (umu.transpose() * ops.Nmu * mode->umu).value();
      const double pKx = (ux.transpose() * ops.Kx * mode->ux).value();
      const double pMx = (ux.transpose() * ops.Mx * mode->ux).value();
      const double pCx = (ux.transpose() * ops.Cx * mode->ux).value();
      rhs -= (pMmu * (pKx * ops.My + pMx * ops.Ky) +
              pNmu * (ops.bx * pCx * ops.My + ops.by * pMx * ops.Cy)) *
             mode->uy;
    }
    next.uy = solve_with_constraints(A, rhs, ops.y_constrained);
  }

  // mu-step: both spatial factors fresh.
  {
    const Vector& ux = next.ux;
    const Vector& uy = next.uy;
    const double wKx = (ux.transpose() * ops.Kx * ux).value();
    const double wMx = (ux.transpose() * ops.Mx * ux).value();
    const double wCx = (ux.transpose() * ops.Cx * ux).value();
    const double wMy = (uy.transpose() * ops.My * uy).value();
    const double wKy = (uy.transpose() * ops.Ky * uy).value();
    const double wCy = (uy.transpose() * ops.Cy * uy).value();

    Matrix A = (wKx * wMy + wMx * wKy) * ops.Mmu +
               (ops.bx * wCx * wMy + ops.by * wMx * wCy) * ops.Nmu;
    Vector rhs = Vector::Zero(ops.Mmu.rows());
    for (std::size_t r = 0; r < ops.fmu.size(); ++r)
      rhs += ux.dot(ops.fx[r]) * uy.dot(ops.fy[r]) * ops.fmu[r];
    for (const ModeTriple* mode : known) {
      const double pKx = (ux.transpose() * ops.Kx * mode->ux).value();
      const double pMx = (ux.transpose() * ops.Mx * mode->ux).value();
      const double pCx = (ux.transpose() * ops.Cx * mode->ux).value();
      const double pMy = (uy.transpose() * ops.My * mode->uy).value();
      const double pKy = (uy.transpose() * ops.Ky * mode->uy).value();
      const double pCy = (uy.transpose() * ops.Cy * mode->uy).value();
      rhs -= ((pKx * pMy + pMx * pKy) * ops.Mmu +
              (ops.bx * pCx * pMy + ops.by * pMx * pCy) * ops.Nmu) *
             mode->umu;
    }
    next.umu = solve_with_constraints(A, rhs, {});
  }
  return next;
}

namespace {

ModeTriple enrich_triple(const PgdParamOperators& ops, const std::vector<ModeTriple>& previous,
                         double tol_fp, std::size_t max_fp, EnrichmentRecord& record) {
  ModeTriple state;
  state.ux = Vector::Zero(ops.Kx.rows());
  state.uy = Vector::Ones(ops.Ky.rows());
  for (std::size_t c : ops.y_constrained) state.uy(static_cast<Eigen::Index>(c)) = 0.0;
  state.umu = Vector::Ones(ops.Mmu.rows());

  // See pgd_enrich: a mode at roundoff scale relative to the first one is
  // noise; accept it instead of reporting non-convergence.
  const double negligible =
      previous.empty() ? 0.0 : 1e-12 * rank1_triple_norm(ops, previous[0]);

  double increment = 1.0;
  for (std::size_t p = 1; p <= max_fp; ++p) {
    const ModeTriple prev = state;
    state = ads_tristep(ops, state, previous);
    if (state.ux.norm() == 0.0) {
      record.fp_iterations = p;
      record.final_increment = 0.0;
      return state;
    }
    // Gauge: unit-normalize the y- and mu-factors, magnitude on x.
    const double ny = std::sqrt(std::max((state.uy.transpose() * ops.My * state.uy).value(), 0.0));
    if (ny > 0.0) {
      state.uy /= ny;
      state.ux *= ny;
    }
    const double nmu =
        std::sqrt(std::max((state.umu.transpose() * ops.Nmu * state.umu).value(), 0.0));
    if (nmu > 0.0) {
      state.umu /= nmu;
      state.ux *= nmu;
    }
    const double product_norm = rank1_triple_norm(ops, state);
    if (product_norm <= negligible) {
      record.fp_iterations = p;
      record.final_increment = 0.0;
      return state;
    }
    const double diff_sq = triple_product_gram(ops, state, state) -
                           2.0 * triple_product_gram(ops, state, prev) +
                           triple_product_gram(ops, prev, prev);
    increment = std::sqrt(std::max(diff_sq, 0.0)) / product_norm;
    if (increment <= tol_fp) {
      record.fp_iterations = p;
      record.final_increment = increment;
      return state;
    }
  }
  throw NonConvergenceError("pgd_param: fixed point did not converge", increment);
}

}  // namespace

PGDParamSolution pgd_param_solve(const ProblemSpec& problem, const Grid1D& x_grid,
                                 const Grid1D& y_grid, const Grid1D& mu_grid,
                                 const PgdOptions& options) {
  if (!(options.tol_e > 0.0) || !(options.tol_fp > 0.0))
    throw std::invalid_argument("pgd_param_solve: tolerances must be positive");

  const PgdParamOperators ops = pgd_param_setup(problem, x_grid, y_grid, mu_grid);
  PGDParamSolution sol;
  sol.x_grid = x_grid;
  sol.y_grid = y_grid;
  sol.mu_grid = mu_grid;
  sol.lift = ops.lift;

  const std::size_t limit = options.fixed_modes.value_or(options.max_modes);
  double first_norm = 0.0;
  for (std::size_t m = 1; m <= limit; ++m) {
    EnrichmentRecord record;
    record.mode_index = m;
    ModeTriple mode = enrich_triple(ops, sol.modes, options.tol_fp, options.max_fp, record);
    const double mode_norm = rank1_triple_norm(ops, mode);
    if (m == 1) {
      const bool has_data = ops.lift || [&] {
        for (const auto& fx : ops.fx)
          if (fx.norm() > 0.0) return true;
        return false;
      }();
      if (mode_norm == 0.0 && has_data)
        throw std::runtime_error("pgd_param_solve: first enrichment is identically zero");
      first_norm = mode_norm;
    }
    record.enrichment_ratio = (first_norm > 0.0) ? mode_norm / first_norm : 0.0;
    sol.modes.push_back(std::move(mode));
    sol.report.steps.push_back(record);
    if (!options.fixed_modes && m >= 2 && record.enrichment_ratio <= options.tol_e) break;
  }
  return sol;
}

Field2D pgd_param_evaluate(const PGDParamSolution& sol, const Grid2D& grid2d, double mu_star) {
  const double tol = 1e-12 * (sol.mu_grid.b - sol.mu_grid.a);
  if (mu_star < sol.mu_grid.a - tol || mu_star > sol.mu_grid.b + tol)
    throw std::out_of_range("pgd_param_evaluate: mu outside the parameter interval");

  Field2D field(grid2d);
  std::vector<const ModeTriple*> terms;
  for (const auto& mode : sol.modes) terms.push_back(&mode);
  if (sol.lift) terms.push_back(&*sol.lift);

  const std::size_t nxn = grid2d.x.n_nodes();
  const std::size_t nyn = grid2d.y.n_nodes();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double wmu = eval_p1(sol.mu_grid, terms[t]->umu, mu_star);
    for (std::size_t ix = 0; ix < nxn; ++ix) {
      const double vx = eval_p1(sol.x_grid, terms[t]->ux, grid2d.x.node(ix)) * wmu;
      if (vx == 0.0) continue;
      for (std::size_t iy = 0; iy < nyn; ++iy)
        field.at(ix, iy) += vx * eval_p1(sol.y_grid, terms[t]->uy, grid2d.y.node(iy));
    }
  }
  return field;
}

}  // namespace varsep
