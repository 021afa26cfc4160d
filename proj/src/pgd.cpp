#include "varsep/pgd.hpp"

#include <cmath>

#include "varsep/linalg.hpp"

namespace varsep {

namespace {

// Solve with the constrained entries eliminated; returns a full-size vector
// with zeros at the constrained positions.
Vector solve_with_constraints(const Matrix& A, const Vector& rhs,
                              const std::vector<std::size_t>& constrained) {
  const auto n = A.rows();
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (std::size_t c : constrained) fixed[c] = 1;
  std::vector<Eigen::Index> free;
  free.reserve(static_cast<std::size_t>(n));
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

std::vector<std::size_t> axis_constraints(const BoundaryCondition& low,
                                          const BoundaryCondition& high, std::size_t n_nodes) {
  std::vector<std::size_t> c;
  if (low.is_dirichlet()) c.push_back(0);
  if (high.is_dirichlet()) c.push_back(n_nodes - 1);
  return c;
}

// Known rank-1 terms the enrichment has to balance: accepted modes plus the
// boundary lift when present.
std::vector<const ModePair*> known_terms(const PgdOperators& ops,
                                         const std::vector<ModePair>& previous) {
  std::vector<const ModePair*> known;
  known.reserve(previous.size() + 1);
  for (const auto& mode : previous) known.push_back(&mode);
  if (ops.lift) known.push_back(&*ops.lift);
  return known;
}

}  // namespace

double rank1_l2_norm(const Matrix& Mx, const Matrix& My, const Vector& a, const Vector& b) {
  const double sq = (a.transpose() * Mx * a).value() * (b.transpose() * My * b).value();
  return std::sqrt(std::max(sq, 0.0));
}

double rank1_diff_l2_norm(const Matrix& Mx, const Matrix& My, const Vector& a1, const Vector& b1,
                          const Vector& a0, const Vector& b0) {
  const double sq = (a1.transpose() * Mx * a1).value() * (b1.transpose() * My * b1).value() -
                    2.0 * (a1.transpose() * Mx * a0).value() * (b1.transpose() * My * b0).value() +
                    (a0.transpose() * Mx * a0).value() * (b0.transpose() * My * b0).value();
  return std::sqrt(std::max(sq, 0.0));
}

PgdOperators pgd_setup(const ProblemSpec& problem, const Grid1D& x_grid, const Grid1D& y_grid) {
  if (problem.is_parametric())
    throw std::invalid_argument("pgd_setup: problem must have a fixed diffusivity");
  if (problem.f.has_mu_factor())
    throw std::invalid_argument("pgd_setup: mu-dependent forcing needs the parametric solver");

  PgdOperators ops;
  ops.x_grid = x_grid;
  ops.y_grid = y_grid;
  ops.Kx = assemble_stiffness_1d(x_grid);
  ops.Mx = assemble_mass_1d(x_grid);
  ops.Cx = assemble_convection_1d(x_grid);
  ops.Ky = assemble_stiffness_1d(y_grid);
  ops.My = assemble_mass_1d(y_grid);
  ops.Cy = assemble_convection_1d(y_grid);
  for (const auto& term : problem.f.terms) {
    ops.fx.push_back(assemble_load_1d(x_grid, term.fx, 5));
    ops.fy.push_back(assemble_load_1d(y_grid, term.fy, 5));
  }
  ops.x_constrained = axis_constraints(problem.bc.left, problem.bc.right, x_grid.n_nodes());
  ops.y_constrained = axis_constraints(problem.bc.bottom, problem.bc.top, y_grid.n_nodes());
  ops.mu = problem.mu_constant();
  ops.bx = problem.bx;
  ops.by = problem.by;

  for (Side s : {Side::Top, Side::Bottom}) {
    const auto& bc = problem.bc.side(s);
    if (bc.is_dirichlet() && !bc.is_homogeneous_dirichlet())
      throw std::invalid_argument("pgd_setup: nonhomogeneous lateral Dirichlet data unsupported");
  }
  const bool left_inhom =
      problem.bc.left.is_dirichlet() && !problem.bc.left.is_homogeneous_dirichlet();
  const bool right_inhom =
      problem.bc.right.is_dirichlet() && !problem.bc.right.is_homogeneous_dirichlet();
  if (left_inhom && right_inhom)
    throw std::invalid_argument("pgd_setup: at most one nonhomogeneous Dirichlet side supported");
  if (left_inhom || right_inhom) {
    // Minimal-support separable lift: inlet-node hat in x times the data
    // profile in y.
    ModePair lift;
    lift.ux = Vector::Zero(static_cast<Eigen::Index>(x_grid.n_nodes()));
    lift.ux(left_inhom ? 0 : static_cast<Eigen::Index>(x_grid.n_nodes() - 1)) = 1.0;
    const auto& g = (left_inhom ? problem.bc.left : problem.bc.right).g;
    lift.uy = interpolate_nodal(y_grid, g);
    for (std::size_t c : ops.y_constrained) lift.uy(static_cast<Eigen::Index>(c)) = 0.0;
    ops.lift = lift;
  }
  return ops;
}

Vector ads_halfstep_x(const PgdOperators& ops, const Vector& uy,
                      const std::vector<ModePair>& previous) {
  const double wM = (uy.transpose() * ops.My * uy).value();
  if (!(wM > 0.0)) throw std::runtime_error("ads_halfstep_x: degenerate mode (zero y-factor)");
  const double wK = (uy.transpose() * ops.Ky * uy).value();
  const double wC = (uy.transpose() * ops.Cy * uy).value();

  Matrix A = ops.mu * (wM * ops.Kx + wK * ops.Mx) + (ops.bx * wM) * ops.Cx + (ops.by * wC) * ops.Mx;
  Vector rhs = Vector::Zero(ops.Kx.rows());
  for (std::size_t r = 0; r < ops.fx.size(); ++r)
    rhs += (uy.dot(ops.fy[r])) * ops.fx[r];
  for (const ModePair* mode : known_terms(ops, previous)) {
    const double pM = (uy.transpose() * ops.My * mode->uy).value();
    const double pK = (uy.transpose() * ops.Ky * mode->uy).value();
    const double pC = (uy.transpose() * ops.Cy * mode->uy).value();
    rhs -= (ops.mu * (pM * ops.Kx + pK * ops.Mx) + (ops.bx * pM) * ops.Cx + (ops.by * pC) * ops.Mx) *
           mode->ux;
  }
  return solve_with_constraints(A, rhs, ops.x_constrained);
}

Vector ads_halfstep_y(const PgdOperators& ops, const Vector& ux,
                      const std::vector<ModePair>& previous) {
  const double wM = (ux.transpose() * ops.Mx * ux).value();
  if (!(wM > 0.0)) throw std::runtime_error("ads_halfstep_y: degenerate mode (zero x-factor)");
  const double wK = (ux.transpose() * ops.Kx * ux).value();
  const double wC = (ux.transpose() * ops.Cx * ux).value();

  Matrix A = ops.mu * (wK * ops.My + wM * ops.Ky) + (ops.bx * wC) * ops.My + (ops.by * wM) * ops.Cy;
  Vector rhs = Vector::Zero(ops.Ky.rows());
  for (std::size_t r = 0; r < ops.fy.size(); ++r)
    rhs += (ux.dot(ops.fx[r])) * ops.fy[r];
  for (const ModePair* mode : known_terms(ops, previous)) {
    const double pK = (ux.transpose() * ops.Kx * mode->ux).value();
    const double pM = (ux.transpose() * ops.Mx * mode->ux).value();
    const double pC = (ux.transpose() * ops.Cx * mode->ux).value();
    rhs -= (ops.mu * (pK * ops.My + pM * ops.Ky) + (ops.bx * pC) * ops.My + (ops.by * pM) * ops.Cy) *
           mode->uy;
  }
  return solve_with_constraints(A, rhs, ops.y_constrained);
}

ModePair pgd_enrich(const PgdOperators& ops, const std::vector<ModePair>& previous, double tol_fp,
                    std::size_t max_fp, EnrichmentRecord& record) {
  if (!(tol_fp > 0.0)) throw std::invalid_argument("pgd_enrich: tol_fp must be positive");

  // Deterministic initial guess: unit interior values on the y-factor.
  Vector uy = Vector::Ones(ops.Ky.rows());
  for (std::size_t c : ops.y_constrained) uy(static_cast<Eigen::Index>(c)) = 0.0;
  Vector ux = Vector::Zero(ops.Kx.rows());

  // When the residual left by the previous modes is pure roundoff, the
  // iterates are noise and the relative increment never settles; accept such
  // a negligible mode instead of reporting non-convergence.
  const double negligible =
      previous.empty() ? 0.0
                       : 1e-12 * rank1_l2_norm(ops.Mx, ops.My, previous[0].ux, previous[0].uy);

  double increment = 1.0;
  for (std::size_t p = 1; p <= max_fp; ++p) {
    const Vector ux_prev = ux;
    const Vector uy_prev = uy;
    ux = ads_halfstep_x(ops, uy, previous);
    if (ux.norm() == 0.0) {
      record.fp_iterations = p;
      record.final_increment = 0.0;
      return {ux, Vector::Zero(ops.Ky.rows())};
    }
    uy = ads_halfstep_y(ops, ux, previous);
    // Scale gauge: unit M^y-norm on the y-factor, magnitude on the x-factor.
    const double nrm = std::sqrt(std::max((uy.transpose() * ops.My * uy).value(), 0.0));
    if (nrm > 0.0) {
      uy /= nrm;
      ux *= nrm;
    }
    const double product_norm = rank1_l2_norm(ops.Mx, ops.My, ux, uy);
    if (product_norm <= negligible) {
      record.fp_iterations = p;
      record.final_increment = 0.0;
      return {ux, uy};
    }
    increment = rank1_diff_l2_norm(ops.Mx, ops.My, ux, uy, ux_prev, uy_prev) / product_norm;
    if (increment <= tol_fp) {
      record.fp_iterations = p;
      record.final_increment = increment;
      return {ux, uy};
    }
  }
  throw NonConvergenceError("pgd_enrich: fixed point did not converge", increment);
}

PGDSolution pgd_solve(const ProblemSpec& problem, const Grid1D& x_grid, const Grid1D& y_grid,
                      const PgdOptions& options) {
  if (!(options.tol_e > 0.0) || !(options.tol_fp > 0.0))
    throw std::invalid_argument("pgd_solve: tolerances must be positive");
  if (options.max_modes == 0) throw std::invalid_argument("pgd_solve: max_modes must be >= 1");

  const PgdOperators ops = pgd_setup(problem, x_grid, y_grid);
  PGDSolution sol;
  sol.x_grid = x_grid;
  sol.y_grid = y_grid;
  sol.lift = ops.lift;

  const bool has_forcing = [&] {
    for (const auto& fx : ops.fx)
      if (fx.norm() > 0.0) return true;
    return false;
  }();

  const std::size_t limit = options.fixed_modes.value_or(options.max_modes);
  double first_norm = 0.0;
  for (std::size_t m = 1; m <= limit; ++m) {
    EnrichmentRecord record;
    record.mode_index = m;
    ModePair mode = pgd_enrich(ops, sol.modes, options.tol_fp, options.max_fp, record);
    const double mode_norm = rank1_l2_norm(ops.Mx, ops.My, mode.ux, mode.uy);
    if (m == 1) {
      if (mode_norm == 0.0 && (has_forcing || ops.lift))
        throw std::runtime_error("pgd_solve: first enrichment is identically zero");
      first_norm = mode_norm;
    }
    record.enrichment_ratio = (first_norm > 0.0) ? mode_norm / first_norm : 0.0;
    sol.modes.push_back(std::move(mode));
    sol.report.steps.push_back(record);
    if (!options.fixed_modes && m >= 2 && record.enrichment_ratio <= options.tol_e) break;
  }
  return sol;
}

Field2D pgd_evaluate(const PGDSolution& sol, const Grid2D& grid2d) {
  Field2D field(grid2d);
  const std::size_t nxn = grid2d.x.n_nodes();
  const std::size_t nyn = grid2d.y.n_nodes();

  // Per-axis P1 interpolation weights reused across the tensor loop.
  std::vector<const ModePair*> terms;
  for (const auto& mode : sol.modes) terms.push_back(&mode);
  if (sol.lift) terms.push_back(&*sol.lift);

  Matrix ux_at(static_cast<Eigen::Index>(terms.size()), static_cast<Eigen::Index>(nxn));
  Matrix uy_at(static_cast<Eigen::Index>(terms.size()), static_cast<Eigen::Index>(nyn));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (std::size_t ix = 0; ix < nxn; ++ix)
      ux_at(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(ix)) =
          eval_p1(sol.x_grid, terms[t]->ux, grid2d.x.node(ix));
    for (std::size_t iy = 0; iy < nyn; ++iy)
      uy_at(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(iy)) =
          eval_p1(sol.y_grid, terms[t]->uy, grid2d.y.node(iy));
  }
  for (std::size_t ix = 0; ix < nxn; ++ix)
    for (std::size_t iy = 0; iy < nyn; ++iy) {
      double v = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t)
        v += ux_at(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(ix)) *
             uy_at(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(iy));
      field.at(ix, iy) = v;
    }
  return field;
}

}  // namespace varsep
