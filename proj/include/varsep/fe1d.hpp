#pragma once

#include "varsep/functions.hpp"
#include "varsep/grid.hpp"
#include "varsep/types.hpp"

namespace varsep {

/// P1 mass matrix, M_il = int theta_i theta_l.
Matrix assemble_mass_1d(const Grid1D& grid);

/// P1 stiffness matrix, K_il = int theta_i' theta_l'.
Matrix assemble_stiffness_1d(const Grid1D& grid);

/// P1 convection matrix, C_il = int theta_l' theta_i (row = test, col = trial).
Matrix assemble_convection_1d(const Grid1D& grid);

/// Weighted P1 mass matrix, int w(q) theta_i theta_l, per-element Gauss with
/// `points` nodes (3 is exact for a linear weight).
Matrix assemble_weighted_mass_1d(const Grid1D& grid, const ScalarFunction1D& w,
                                 std::size_t points = 3);

/// Load vector f_i = int g theta_i, per-element Gauss with `points` nodes.
Vector assemble_load_1d(const Grid1D& grid, const ScalarFunction1D& g, std::size_t points = 5);

/// Nodal interpolant of g.
Vector interpolate_nodal(const Grid1D& grid, const ScalarFunction1D& g);

/// P1 interpolation of nodal values at x.
double eval_p1(const Grid1D& grid, const Vector& nodal, double x);

}  // namespace varsep
