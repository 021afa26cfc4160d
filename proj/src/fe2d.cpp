#include "varsep/fe2d.hpp"

#include <Eigen/Sparse>
#include <array>
#include <cmath>
#include <sstream>

#include "varsep/linalg.hpp"

namespace varsep {

namespace {

constexpr double kGauss2 = 0.28867513459481287;  // 1/(2 sqrt(3))

struct QPoint {
  double s, t, w;
};

// 2x2 Gauss on the reference cell [0,1]^2, weights summing to 1.
constexpr std::array<QPoint, 4> kCellQuad = {{
    {0.5 - kGauss2, 0.5 - kGauss2, 0.25},
    {0.5 + kGauss2, 0.5 - kGauss2, 0.25},
    {0.5 - kGauss2, 0.5 + kGauss2, 0.25},
    {0.5 + kGauss2, 0.5 + kGauss2, 0.25},
}};

void shape(double s, double t, std::array<double, 4>& N, std::array<double, 4>& dNds,
           std::array<double, 4>& dNdt) {
  N = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
  dNds = {-(1 - t), (1 - t), -t, t};
  dNdt = {-(1 - s), -s, (1 - s), s};
}

}  // namespace

Fe2dResult fe2d_solve(const ProblemSpec& problem, const Grid2D& grid,
                      std::optional<double> mu_star) {
  if (problem.is_parametric() && !mu_star)
    throw std::invalid_argument("fe2d_solve: parametric problem needs mu_star");
  const double mu = problem.is_parametric() ? *mu_star : problem.mu_constant();
  if (!(mu > 0.0)) throw std::invalid_argument("fe2d_solve: diffusivity must be positive");

  const Grid1D& gx = grid.x;
  const Grid1D& gy = grid.y;
  const std::size_t nyn = gy.n_nodes();
  const std::size_t n = gx.n_nodes() * nyn;
  const double hx = gx.h(), hy = gy.h();

  Fe2dResult result;
  const double peclet = std::max(std::abs(problem.bx) * hx, std::abs(problem.by) * hy) / (2.0 * mu);
  if (peclet > 1.0) {
    std::ostringstream msg;
    msg << "mesh Peclet number " << peclet << " exceeds 1; Galerkin solution may oscillate";
    result.warnings.push_back(msg.str());
  }

  // Dirichlet values per node; Dirichlet sides win over Neumann at corners.
  std::vector<char> constrained(n, 0);
  std::vector<double> bc_value(n, 0.0);
  auto constrain = [&](std::size_t ix, std::size_t iy, double value) {
    const std::size_t id = ix * nyn + iy;
    constrained[id] = 1;
    bc_value[id] = value;
  };
  if (problem.bc.bottom.is_dirichlet())
    for (std::size_t ix = 0; ix < gx.n_nodes(); ++ix)
      constrain(ix, 0, problem.bc.bottom.g(gx.node(ix)));
  if (problem.bc.top.is_dirichlet())
    for (std::size_t ix = 0; ix < gx.n_nodes(); ++ix)
      constrain(ix, nyn - 1, problem.bc.top.g(gx.node(ix)));
  if (problem.bc.left.is_dirichlet())
    for (std::size_t iy = 0; iy < nyn; ++iy) constrain(0, iy, problem.bc.left.g(gy.node(iy)));
  if (problem.bc.right.is_dirichlet())
    for (std::size_t iy = 0; iy < nyn; ++iy)
      constrain(gx.n_nodes() - 1, iy, problem.bc.right.g(gy.node(iy)));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * n);
  Vector F = Vector::Zero(static_cast<Eigen::Index>(n));

  std::optional<double> f_mu;
  if (problem.f.has_mu_factor()) f_mu = mu;

  const double jac = hx * hy;
  std::array<double, 4> N, dNds, dNdt;
  for (std::size_t ex = 0; ex < gx.n_elems; ++ex) {
    for (std::size_t ey = 0; ey < gy.n_elems; ++ey) {
      const std::array<std::size_t, 4> dofs = {
          ex * nyn + ey, (ex + 1) * nyn + ey, ex * nyn + ey + 1, (ex + 1) * nyn + ey + 1};
      std::array<std::array<double, 4>, 4> Ae{};
      std::array<double, 4> Fe{};
      for (const auto& q : kCellQuad) {
        shape(q.s, q.t, N, dNds, dNdt);
        const double x = gx.node(ex) + q.s * hx;
        const double y = gy.node(ey) + q.t * hy;
        const double fv = evaluate_separable(problem.f, x, y, f_mu);
        const double wq = q.w * jac;
        for (int i = 0; i < 4; ++i) {
          const double dxi = dNds[static_cast<std::size_t>(i)] / hx;
          const double dyi = dNdt[static_cast<std::size_t>(i)] / hy;
          Fe[static_cast<std::size_t>(i)] += wq * fv * N[static_cast<std::size_t>(i)];
          for (int j = 0; j < 4; ++j) {
            const double dxj = dNds[static_cast<std::size_t>(j)] / hx;
            const double dyj = dNdt[static_cast<std::size_t>(j)] / hy;
            Ae[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                wq * (mu * (dxi * dxj + dyi * dyj) +
                      (problem.bx * dxj + problem.by * dyj) * N[static_cast<std::size_t>(i)]);
          }
        }
      }
      for (int i = 0; i < 4; ++i) {
        const std::size_t gi = dofs[static_cast<std::size_t>(i)];
        if (constrained[gi]) continue;
        F(static_cast<Eigen::Index>(gi)) += Fe[static_cast<std::size_t>(i)];
        for (int j = 0; j < 4; ++j) {
          const std::size_t gj = dofs[static_cast<std::size_t>(j)];
          const double a = Ae[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          if (constrained[gj]) {
            F(static_cast<Eigen::Index>(gi)) -= a * bc_value[gj];  // lifting
          } else {
            triplets.emplace_back(static_cast<int>(gi), static_cast<int>(gj), a);
          }
        }
      }
    }
  }
  for (std::size_t id = 0; id < n; ++id) {
    if (constrained[id]) {
      triplets.emplace_back(static_cast<int>(id), static_cast<int>(id), 1.0);
      F(static_cast<Eigen::Index>(id)) = bc_value[id];
    }
  }

  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("fe2d_solve: factorization failed");
  Vector u = lu.solve(F);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("fe2d_solve: solve failed");

  const double fnorm = F.norm();
  if (fnorm > 0.0) {
    const double rel = (A * u - F).norm() / fnorm;
    if (rel > 1e-10) {
      std::ostringstream msg;
      msg << "algebraic residual " << rel << " above 1e-10";
      result.warnings.push_back(msg.str());
    }
  }

  result.field = Field2D(grid);
  result.field.values = u;
  return result;
}

namespace {

double cell_quadrature_sq(const Field2D& u, const Field2D* ref) {
  const Grid1D& gx = u.grid.x;
  const Grid1D& gy = u.grid.y;
  const double jac = gx.h() * gy.h();
  std::array<double, 4> N, dNds, dNdt;
  double acc = 0.0;
  for (std::size_t ex = 0; ex < gx.n_elems; ++ex) {
    for (std::size_t ey = 0; ey < gy.n_elems; ++ey) {
      const std::array<double, 4> uv = {u.at(ex, ey), u.at(ex + 1, ey), u.at(ex, ey + 1),
                                        u.at(ex + 1, ey + 1)};
      std::array<double, 4> rv{};
      if (ref)
        rv = {ref->at(ex, ey), ref->at(ex + 1, ey), ref->at(ex, ey + 1), ref->at(ex + 1, ey + 1)};
      for (const auto& q : kCellQuad) {
        shape(q.s, q.t, N, dNds, dNdt);
        double v = 0.0;
        for (int i = 0; i < 4; ++i)
          v += (uv[static_cast<std::size_t>(i)] - (ref ? rv[static_cast<std::size_t>(i)] : 0.0)) *
               N[static_cast<std::size_t>(i)];
        acc += q.w * jac * v * v;
      }
    }
  }
  return acc;
}

}  // namespace

double l2_norm(const Field2D& u) { return std::sqrt(cell_quadrature_sq(u, nullptr)); }

double relative_l2_error(const Field2D& u, const Field2D& ref) {
  if (u.grid.x.n_elems != ref.grid.x.n_elems || u.grid.y.n_elems != ref.grid.y.n_elems)
    throw std::invalid_argument("relative_l2_error: fields must share a grid");
  const double denom = l2_norm(ref);
  if (denom == 0.0) throw std::domain_error("relative_l2_error: reference has zero norm");
  return std::sqrt(cell_quadrature_sq(u, &ref)) / denom;
}

}  // namespace varsep
