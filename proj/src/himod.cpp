#include "varsep/himod.hpp"

#include <cmath>
#include <numbers>

#include "varsep/fe1d.hpp"
#include "varsep/linalg.hpp"
#include "varsep/quadrature.hpp"

namespace varsep {

namespace {

// Shared transverse rule on (0,1). Composite so that both the oscillatory
// r-hat integrands (frequency up to 2*m*pi) and sharply peaked forcing
// profiles are resolved to well below 1e-10.
const MappedQuadrature& transverse_quadrature() {
  static const MappedQuadrature rule = composite_gauss(0.0, 1.0, 64, 10);
  return rule;
}

void check_lateral_bcs(const ProblemSpec& problem) {
  for (Side s : {Side::Top, Side::Bottom}) {
    const auto& bc = problem.bc.side(s);
    if (!bc.is_dirichlet() || !bc.is_homogeneous_dirichlet())
      throw std::invalid_argument(
          "himod: sine basis requires homogeneous Dirichlet data on top and bottom");
  }
}

}  // namespace

ModalBasis::ModalBasis(std::size_t m_) : m(m_) {
  if (m == 0) throw std::invalid_argument("ModalBasis: mode count must be >= 1");
}

std::pair<double, double> ModalBasis::eval(std::size_t k, double yhat) const {
  if (k < 1 || k > m) throw std::invalid_argument("ModalBasis::eval: mode index out of range");
  const double kpi = static_cast<double>(k) * std::numbers::pi;
  const double amp = std::numbers::sqrt2;
  return {amp * std::sin(kpi * yhat), amp * kpi * std::cos(kpi * yhat)};
}

RHatCoefficients compute_rhat(const ProblemSpec& problem, const ModalBasis& basis,
                              std::optional<double> mu_star) {
  if (problem.is_parametric() && !mu_star)
    throw std::invalid_argument("compute_rhat: parametric problem needs mu_star");
  const double mu = problem.is_parametric() ? *mu_star : problem.mu_constant();
  const double Ly = problem.length_y();
  const auto m = static_cast<Eigen::Index>(basis.m);

  // Transverse Gram matrices by quadrature; the closed sine-basis forms are
  // kept out of the implementation and used as test oracles.
  Matrix G00 = Matrix::Zero(m, m);  // int phi_j phi_k
  Matrix G11 = Matrix::Zero(m, m);  // int phi_j' phi_k'
  Matrix G01 = Matrix::Zero(m, m);  // int phi_j phi_k'   (test j, trial k)
  const auto& q = transverse_quadrature();
  Matrix vals(m, q.points.size());
  Matrix ders(m, q.points.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index g = 0; g < q.points.size(); ++g) {
      const auto [v, d] = basis.eval(static_cast<std::size_t>(j) + 1, q.points(g));
      vals(j, g) = v;
      ders(j, g) = d;
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::Index g = 0; g < q.points.size(); ++g) {
        const double w = q.weights(g);
        G00(j, k) += w * vals(j, g) * vals(k, g);
        G11(j, k) += w * ders(j, g) * ders(k, g);
        G01(j, k) += w * vals(j, g) * ders(k, g);
      }
    }
  }

  RHatCoefficients rhat;
  rhat.r[1][1] = mu * Ly * G00;
  rhat.r[0][0] = (mu / Ly) * G11 + problem.by * G01;
  rhat.r[1][0] = problem.bx * Ly * G00;
  rhat.r[0][1] = Matrix::Zero(m, m);
  return rhat;
}

Vector HiModSolution::flatten() const {
  const auto m = coeffs.rows();
  const auto nh = coeffs.cols();
  Vector u(m * nh);
  for (Eigen::Index k = 0; k < m; ++k) u.segment(k * nh, nh) = coeffs.row(k).transpose();
  return u;
}

HiModSolution HiModSolution::from_vector(const Grid1D& grid, const ModalBasis& basis,
                                         const Vector& u) {
  const auto m = static_cast<Eigen::Index>(basis.m);
  const auto nh = static_cast<Eigen::Index>(grid.n_nodes());
  if (u.size() != m * nh) throw std::invalid_argument("HiModSolution: size mismatch");
  HiModSolution sol{grid, basis, Matrix(m, nh)};
  for (Eigen::Index k = 0; k < m; ++k) sol.coeffs.row(k) = u.segment(k * nh, nh).transpose();
  return sol;
}

Vector himod_inlet_projection(const ScalarFunction1D& g, const ModalBasis& basis, double y0,
                              double length_y) {
  const auto m = static_cast<Eigen::Index>(basis.m);
  Vector coeff = Vector::Zero(m);
  const auto& q = transverse_quadrature();
  for (Eigen::Index k = 0; k < m; ++k) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.points.size(); ++i) {
      const double yhat = q.points(i);
      acc += q.weights(i) * g(y0 + length_y * yhat) *
             basis.eval(static_cast<std::size_t>(k) + 1, yhat).first;
    }
    coeff(k) = acc;
  }
  return coeff;
}

namespace {

struct RawSystem {
  Matrix A;
  Vector f;
  std::vector<std::size_t> constrained;
  Vector constrained_values;
};

// Assembles the m*N_h block system without boundary conditions, for given
// diffusivity/advection (passed through a problem copy so the affine split
// can zero out either part).
Matrix assemble_matrix_raw(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           std::optional<double> mu_star) {
  const auto m = static_cast<Eigen::Index>(basis.m);
  const auto nh = static_cast<Eigen::Index>(grid.n_nodes());
  const RHatCoefficients rhat = compute_rhat(problem, basis, mu_star);
  const Matrix K = assemble_stiffness_1d(grid);
  const Matrix M = assemble_mass_1d(grid);
  const Matrix C = assemble_convection_1d(grid);
  Matrix A = Matrix::Zero(m * nh, m * nh);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      Matrix block = rhat(1, 1)(j, k) * K + rhat(0, 0)(j, k) * M;
      if (rhat(1, 0)(j, k) != 0.0) block += rhat(1, 0)(j, k) * C;
      if (rhat(0, 1)(j, k) != 0.0) block += rhat(0, 1)(j, k) * C.transpose();
      A.block(j * nh, k * nh, nh, nh) = block;
    }
  }
  return A;
}

Vector assemble_rhs_raw(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                        std::optional<double> mu_star) {
  const auto m = static_cast<Eigen::Index>(basis.m);
  const auto nh = static_cast<Eigen::Index>(grid.n_nodes());
  const double Ly = problem.length_y();
  Vector f = Vector::Zero(m * nh);
  const auto& q = transverse_quadrature();
  for (const auto& term : problem.f.terms) {
    double mu_scale = 1.0;
    if (term.fmu) {
      if (!mu_star && !problem.is_parametric())
        throw std::invalid_argument("himod: forcing mu factor without a parameter value");
      mu_scale = (*term.fmu)(mu_star ? *mu_star : problem.mu_constant());
    }
    const Vector fx = assemble_load_1d(grid, term.fx, 5);
    for (Eigen::Index j = 0; j < m; ++j) {
      double c = 0.0;
      for (Eigen::Index i = 0; i < q.points.size(); ++i) {
        const double yhat = q.points(i);
        c += q.weights(i) * term.fy(problem.y0 + Ly * yhat) *
             basis.eval(static_cast<std::size_t>(j) + 1, yhat).first;
      }
      f.segment(j * nh, nh) += (mu_scale * Ly * c) * fx;
    }
  }
  return f;
}

// Dirichlet dofs on the supporting-fiber endpoints, with modal projections of
// the inlet/outlet data as constrained values.
std::pair<std::vector<std::size_t>, Vector> constrained_dofs(const ProblemSpec& problem,
                                                             const ModalBasis& basis,
                                                             const Grid1D& grid) {
  const std::size_t nh = grid.n_nodes();
  std::vector<std::size_t> idx;
  std::vector<double> val;
  auto add_side = [&](const BoundaryCondition& bc, std::size_t node) {
    if (!bc.is_dirichlet()) return;
    const Vector g = bc.is_homogeneous_dirichlet()
                         ? Vector::Zero(static_cast<Eigen::Index>(basis.m))
                         : himod_inlet_projection(bc.g, basis, problem.y0, problem.length_y());
    for (std::size_t k = 0; k < basis.m; ++k) {
      idx.push_back(k * nh + node);
      val.push_back(g(static_cast<Eigen::Index>(k)));
    }
  };
  add_side(problem.bc.left, 0);
  add_side(problem.bc.right, nh - 1);
  Vector values(static_cast<Eigen::Index>(val.size()));
  for (std::size_t i = 0; i < val.size(); ++i) values(static_cast<Eigen::Index>(i)) = val[i];
  return {idx, values};
}

void impose_dirichlet(Matrix& A, Vector& f, const std::vector<std::size_t>& constrained,
                      const Vector& values) {
  for (std::size_t i = 0; i < constrained.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(constrained[i]);
    f -= A.col(c) * values(static_cast<Eigen::Index>(i));
    A.row(c).setZero();
    A.col(c).setZero();
    A(c, c) = 1.0;
  }
  for (std::size_t i = 0; i < constrained.size(); ++i)
    f(static_cast<Eigen::Index>(constrained[i])) = values(static_cast<Eigen::Index>(i));
}

}  // namespace

std::pair<std::vector<std::size_t>, Vector> himod_constrained_dofs(const ProblemSpec& problem,
                                                                   const ModalBasis& basis,
                                                                   const Grid1D& grid) {
  return constrained_dofs(problem, basis, grid);
}

HiModSystem himod_assemble(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           std::optional<double> mu_star) {
  check_lateral_bcs(problem);
  HiModSystem sys;
  sys.A = assemble_matrix_raw(problem, basis, grid, mu_star);
  sys.f = assemble_rhs_raw(problem, basis, grid, mu_star);
  const auto [constrained, values] = constrained_dofs(problem, basis, grid);
  impose_dirichlet(sys.A, sys.f, constrained, values);
  return sys;
}

HiModAffineSystem himod_assemble_affine(const ProblemSpec& problem, const ModalBasis& basis,
                                        const Grid1D& grid) {
  check_lateral_bcs(problem);
  if (problem.f.has_mu_factor())
    throw std::invalid_argument("himod_assemble_affine: forcing must be mu-independent");

  ProblemSpec diff_only = problem;
  diff_only.mu = 1.0;
  diff_only.bx = 0.0;
  diff_only.by = 0.0;
  ProblemSpec adv_only = problem;
  adv_only.mu = 1.0;  // placeholder; the diffusion part is subtracted below

  HiModAffineSystem sys;
  sys.A_diff = assemble_matrix_raw(diff_only, basis, grid, std::nullopt);
  sys.A_rest = assemble_matrix_raw(adv_only, basis, grid, std::nullopt) - sys.A_diff;
  const Vector f_raw = assemble_rhs_raw(problem, basis, grid, std::nullopt);
  std::tie(sys.constrained, sys.constrained_values) = constrained_dofs(problem, basis, grid);

  sys.f_const = f_raw;
  sys.f_mu = Vector::Zero(f_raw.size());
  for (std::size_t i = 0; i < sys.constrained.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(sys.constrained[i]);
    const double v = sys.constrained_values(static_cast<Eigen::Index>(i));
    sys.f_const -= sys.A_rest.col(c) * v;
    sys.f_mu -= sys.A_diff.col(c) * v;
    sys.A_diff.row(c).setZero();
    sys.A_diff.col(c).setZero();
    sys.A_rest.row(c).setZero();
    sys.A_rest.col(c).setZero();
    sys.A_rest(c, c) = 1.0;
  }
  for (std::size_t i = 0; i < sys.constrained.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(sys.constrained[i]);
    sys.f_const(c) = sys.constrained_values(static_cast<Eigen::Index>(i));
    sys.f_mu(c) = 0.0;
  }
  return sys;
}

HiModSolution himod_solve(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                          std::optional<double> mu_star) {
  const HiModSystem sys = himod_assemble(problem, basis, grid, mu_star);
  return HiModSolution::from_vector(grid, basis, solve_dense(sys.A, sys.f));
}

Field2D himod_evaluate(const HiModSolution& sol, const ProblemSpec& problem,
                       const Grid2D& grid2d) {
  const double Ly = problem.length_y();
  Field2D field(grid2d);
  const double ytol = 1e-12 * Ly;
  for (std::size_t ix = 0; ix < grid2d.x.n_nodes(); ++ix) {
    const double x = grid2d.x.node(ix);
    // Modal coefficients interpolated once per x.
    const auto [e, t] = sol.grid.locate(x);
    const auto el = static_cast<Eigen::Index>(e);
    const Vector coef =
        (1.0 - t) * sol.coeffs.col(el) + t * sol.coeffs.col(el + 1);
    for (std::size_t iy = 0; iy < grid2d.y.n_nodes(); ++iy) {
      const double y = grid2d.y.node(iy);
      const double yhat = (y - problem.y0) / Ly;
      if (yhat < -ytol || yhat > 1.0 + ytol)
        throw std::invalid_argument("himod_evaluate: point outside domain");
      double v = 0.0;
      for (std::size_t k = 1; k <= sol.basis.m; ++k)
        v += coef(static_cast<Eigen::Index>(k - 1)) * sol.basis.eval(k, yhat).first;
      field.at(ix, iy) = v;
    }
  }
  return field;
}

}  // namespace varsep
