#pragma once

#include <optional>
#include <vector>

#include "varsep/pgd.hpp"

namespace varsep {

/// Rank-1 triple ux(x) uy(y) umu(mu); uy and umu unit-normalized in their
/// discrete L2 norms after a converged sweep.
struct ModeTriple {
  Vector ux;
  Vector uy;
  Vector umu;
};

/// Parameter-axis operators: Mmu is the mu-weighted mass (diffusion
/// weighting), Nmu the plain mass (advection weighting, and the L2(mu) Gram),
/// fmu the data projection per separable term.
struct PgdParamOperators {
  Grid1D x_grid, y_grid, mu_grid;
  Matrix Kx, Mx, Cx;
  Matrix Ky, My, Cy;
  Matrix Mmu, Nmu;
  std::vector<Vector> fx, fy, fmu;
  std::vector<std::size_t> x_constrained, y_constrained;
  std::optional<ModeTriple> lift;
  double bx = 0.0, by = 0.0;
};

PgdParamOperators pgd_param_setup(const ProblemSpec& problem, const Grid1D& x_grid,
                                  const Grid1D& y_grid, const Grid1D& mu_grid);

/// Parameter mass matrices on a ParamGrid: (mu-weighted mass, plain mass).
std::pair<Matrix, Matrix> assemble_param_masses(const Grid1D& mu_grid);

struct PGDParamSolution {
  Grid1D x_grid, y_grid, mu_grid;
  std::vector<ModeTriple> modes;
  std::optional<ModeTriple> lift;
  ADSReport report;
};

/// One fixed-point sweep of the three-step alternating direction scheme,
/// in order x -> y -> mu, each solve using the freshest available factors.
ModeTriple ads_tristep(const PgdParamOperators& ops, const ModeTriple& current,
                       const std::vector<ModeTriple>& previous);

PGDParamSolution pgd_param_solve(const ProblemSpec& problem, const Grid1D& x_grid,
                                 const Grid1D& y_grid, const Grid1D& mu_grid,
                                 const PgdOptions& options);

/// Direct evaluation at (x, y, mu_star); mu_star must lie inside the
/// parameter interval (no extrapolation).
Field2D pgd_param_evaluate(const PGDParamSolution& sol, const Grid2D& grid2d, double mu_star);

double rank1_triple_norm(const PgdParamOperators& ops, const ModeTriple& t);

}  // namespace varsep
