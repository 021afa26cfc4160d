#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varsep/grid.hpp"
#include "varsep/problem.hpp"

namespace varsep {

struct Fe2dResult {
  Field2D field;
  std::vector<std::string> warnings;  // e.g. mesh Peclet number > 1
};

/// Full-order Q1 Galerkin reference solver on a structured grid. Dirichlet
/// data imposed strongly by row/column elimination with lifting; homogeneous
/// Neumann is natural. For a parametric problem, mu_star must be supplied.
Fe2dResult fe2d_solve(const ProblemSpec& problem, const Grid2D& grid,
                      std::optional<double> mu_star = std::nullopt);

/// ||u - ref||_{L2} / ||ref||_{L2} for two fields on the same grid, using
/// 2x2 Gauss per cell (exact for products of bilinears).
double relative_l2_error(const Field2D& u, const Field2D& ref);

/// ||u||_{L2(Omega)} of the bilinear interpolant.
double l2_norm(const Field2D& u);

}  // namespace varsep
