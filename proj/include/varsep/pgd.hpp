#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "varsep/fe1d.hpp"
#include "varsep/grid.hpp"
#include "varsep/problem.hpp"
#include "varsep/types.hpp"

namespace varsep {

/// One rank-1 enrichment: u(x,y) contribution ux(x) * uy(y), P1 nodal values
/// per axis. Dirichlet-constrained entries are zero (the reduced problem is
/// homogeneous after lifting); uy holds unit discrete L2 norm after a
/// converged sweep, ux carries the magnitude.
struct ModePair {
  Vector ux;
  Vector uy;
};

struct EnrichmentRecord {
  std::size_t mode_index = 0;       // 1-based
  std::size_t fp_iterations = 0;
  double final_increment = 0.0;     // fixed-point relative increment at exit
  double enrichment_ratio = 0.0;    // ||u_m x u_m y|| / ||u_1 x u_1 y||
};

struct ADSReport {
  std::vector<EnrichmentRecord> steps;
};

/// Precomputed 1D operators and data projections for one PGD run.
struct PgdOperators {
  Grid1D x_grid, y_grid;
  Matrix Kx, Mx, Cx;
  Matrix Ky, My, Cy;
  std::vector<Vector> fx;  // per separable term
  std::vector<Vector> fy;
  std::vector<std::size_t> x_constrained;  // node indices held at zero
  std::vector<std::size_t> y_constrained;
  std::optional<ModePair> lift;  // rank-1 lift for nonhomogeneous Dirichlet data
  double mu = 1.0;
  double bx = 0.0, by = 0.0;
};

PgdOperators pgd_setup(const ProblemSpec& problem, const Grid1D& x_grid, const Grid1D& y_grid);

struct PGDSolution {
  Grid1D x_grid, y_grid;
  std::vector<ModePair> modes;
  std::optional<ModePair> lift;
  ADSReport report;
};

/// One half-sweep of the alternating direction fixed point: solve the
/// x-system with the y-factor frozen. `previous` are the already accepted
/// modes (the lift, when present, is handled as one more known term).
Vector ads_halfstep_x(const PgdOperators& ops, const Vector& uy,
                      const std::vector<ModePair>& previous);
Vector ads_halfstep_y(const PgdOperators& ops, const Vector& ux,
                      const std::vector<ModePair>& previous);

struct NonConvergenceError : std::runtime_error {
  double last_increment;
  NonConvergenceError(const std::string& what, double increment)
      : std::runtime_error(what), last_increment(increment) {}
};

/// Computes one enrichment mode by the alternating fixed point, stopping on
/// the relative increment of the rank-1 product. Throws NonConvergenceError
/// past max_fp iterations.
ModePair pgd_enrich(const PgdOperators& ops, const std::vector<ModePair>& previous, double tol_fp,
                    std::size_t max_fp, EnrichmentRecord& record);

struct PgdOptions {
  double tol_e = 1e-2;
  double tol_fp = 1e-2;
  std::size_t max_modes = 30;
  std::size_t max_fp = 50;
  std::optional<std::size_t> fixed_modes;  // skip the enrichment criterion
};

PGDSolution pgd_solve(const ProblemSpec& problem, const Grid1D& x_grid, const Grid1D& y_grid,
                      const PgdOptions& options);

Field2D pgd_evaluate(const PGDSolution& sol, const Grid2D& grid2d);

/// ||a (x) b||_{L2(Omega)} via the Kronecker identity with the axis mass
/// matrices.
double rank1_l2_norm(const Matrix& Mx, const Matrix& My, const Vector& a, const Vector& b);

/// ||a1 (x) b1 - a0 (x) b0||_{L2(Omega)} via Gram identities (exact for
/// P1 x P1 functions).
double rank1_diff_l2_norm(const Matrix& Mx, const Matrix& My, const Vector& a1, const Vector& b1,
                          const Vector& a0, const Vector& b0);

}  // namespace varsep
