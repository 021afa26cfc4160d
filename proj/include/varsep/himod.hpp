#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "varsep/fe2d.hpp"
#include "varsep/grid.hpp"
#include "varsep/problem.hpp"
#include "varsep/types.hpp"

namespace varsep {

/// Sinusoidal transverse modal basis phi_k(yhat) = sqrt(2) sin(k pi yhat) on
/// the reference fiber yhat in (0,1); L2-orthonormal.
struct ModalBasis {
  std::size_t m = 1;

  explicit ModalBasis(std::size_t m_);

  /// (value, derivative w.r.t. yhat) of mode k at yhat; 1 <= k <= m.
  std::pair<double, double> eval(std::size_t k, double yhat) const;
};

/// Transverse-integrated operator coefficients. Index [a][b] pairs the a-th
/// x-derivative of the trial factor with the b-th of the test factor; each is
/// an m x m matrix over (test mode j, trial mode k). Constant-coefficient
/// problems make them x-independent.
struct RHatCoefficients {
  std::array<std::array<Matrix, 2>, 2> r;

  const Matrix& operator()(int a, int b) const { return r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
};

/// r-hat coefficients for the operator -mu Laplace + b . grad on a rectangle
/// with the affine transverse map yhat = (y - y0)/Ly. Computed by quadrature;
/// the closed sine-basis forms serve as test oracles. For a parametric
/// problem, mu_star fixes the diffusivity.
RHatCoefficients compute_rhat(const ProblemSpec& problem, const ModalBasis& basis,
                              std::optional<double> mu_star = std::nullopt);

/// Modal-coefficient solution: coeffs(k-1, l) is the coefficient of mode k at
/// x-node l; the flattened unknown vector orders by mode, then node.
struct HiModSolution {
  Grid1D grid;
  ModalBasis basis;
  Matrix coeffs;  // m x N_h

  Vector flatten() const;
  static HiModSolution from_vector(const Grid1D& grid, const ModalBasis& basis, const Vector& u);
};

/// L2(yhat) projection of boundary data g (given in physical y on the fiber)
/// onto the modal basis: coefficients int g(y(yhat)) phi_k(yhat) dyhat.
Vector himod_inlet_projection(const ScalarFunction1D& g, const ModalBasis& basis, double y0,
                              double length_y);

struct HiModSystem {
  Matrix A;
  Vector f;
};

/// Assembled m*N_h system with boundary conditions imposed.
HiModSystem himod_assemble(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           std::optional<double> mu_star = std::nullopt);

/// Flattened Dirichlet dof indices and their prescribed modal values.
std::pair<std::vector<std::size_t>, Vector> himod_constrained_dofs(const ProblemSpec& problem,
                                                                   const ModalBasis& basis,
                                                                   const Grid1D& grid);

/// Affine-in-mu split of the assembled system: A(mu) = mu * A_diff + A_rest,
/// f(mu) = f_const + mu * f_mu (the mu part comes from Dirichlet lifting of
/// the diffusion columns). Constrained dofs carry identity rows in A_rest.
struct HiModAffineSystem {
  Matrix A_diff;
  Matrix A_rest;
  Vector f_const;
  Vector f_mu;
  std::vector<std::size_t> constrained;  // flattened dof indices
  Vector constrained_values;

  Matrix assemble_matrix(double mu) const { return mu * A_diff + A_rest; }
  Vector assemble_rhs(double mu) const { return f_const + mu * f_mu; }
};

HiModAffineSystem himod_assemble_affine(const ProblemSpec& problem, const ModalBasis& basis,
                                        const Grid1D& grid);

HiModSolution himod_solve(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                          std::optional<double> mu_star = std::nullopt);

/// Nodal sampling of the modal representation on a 2D grid spanning the
/// problem domain.
Field2D himod_evaluate(const HiModSolution& sol, const ProblemSpec& problem, const Grid2D& grid2d);

}  // namespace varsep
