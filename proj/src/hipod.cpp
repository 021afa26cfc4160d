#include "varsep/hipod.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/SVD>

#include "varsep/linalg.hpp"

namespace varsep {

std::size_t pod_truncate(const Vector& sigma, double eps, PodTruncation rule) {
  if (!(eps > 0.0)) throw std::invalid_argument("pod_truncate: eps must be positive");
  const auto n = static_cast<std::size_t>(sigma.size());
  if (n == 0) throw std::invalid_argument("pod_truncate: empty singular value list");
  std::size_t kept = 0;
  while (kept < n && sigma(static_cast<Eigen::Index>(kept)) * sigma(static_cast<Eigen::Index>(kept)) >= eps)
    ++kept;
  if (rule == PodTruncation::KeepAtOrAbove) return std::max<std::size_t>(kept, 1);
  // Literal reading: the smallest index whose sigma^2 falls below eps.
  return std::max<std::size_t>(std::min(kept + 1, n), 1);
}

HipodOffline hipod_offline(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           const std::vector<double>& samples, double eps, PodTruncation rule) {
  if (!problem.is_parametric())
    throw std::invalid_argument("hipod_offline: problem must carry a parameter interval");
  if (samples.size() < 2) throw std::invalid_argument("hipod_offline: need at least 2 samples");
  const auto iv = problem.mu_interval();
  for (double mu : samples)
    if (mu < iv.mu_min - 1e-12 || mu > iv.mu_max + 1e-12)
      throw std::invalid_argument("hipod_offline: sample outside the parameter interval");

  const auto P = static_cast<Eigen::Index>(samples.size());
  const auto n = static_cast<Eigen::Index>(basis.m * grid.n_nodes());

  HipodOffline out;
  out.snapshots.samples = samples;
  out.snapshots.S = Matrix(n, P);
  for (Eigen::Index i = 0; i < P; ++i) {
    const HiModSolution sol =
        himod_solve(problem, basis, grid, samples[static_cast<std::size_t>(i)]);
    out.snapshots.S.col(i) = sol.flatten();
  }

  PODBasis& pod = out.pod;
  pod.eps = eps;
  pod.mean = out.snapshots.S.rowwise().mean();
  const Matrix V = out.snapshots.S.colwise() - pod.mean;

  // Thin SVD of the deviation matrix. The P x P Gram route (method of
  // snapshots) floors singular directions at sqrt(machine-eps) relative, which
  // is too coarse for the small-sigma modes the online errors depend on.
  Eigen::BDCSVD<Matrix> svd(V, Eigen::ComputeThinU);
  const Vector sigma_all = svd.singularValues();
  const double sigma_max = sigma_all(0);

  if (sigma_max <= 0.0) {
    // All snapshots identical: fall back to the normalized mean direction.
    pod.sigma = sigma_all;
    pod.l = 1;
    const double mean_norm = pod.mean.norm();
    pod.Phi = Matrix::Zero(n, 1);
    if (mean_norm > 0.0)
      pod.Phi.col(0) = pod.mean / mean_norm;
    else
      pod.Phi(0, 0) = 1.0;
    pod.diagnostics.push_back("rank-0 deviation matrix: basis forced to the mean direction");
    return out;
  }

  Eigen::Index rank = 0;
  while (rank < sigma_all.size() && sigma_all(rank) >= 1e-14 * sigma_max) ++rank;
  pod.sigma = sigma_all;
  pod.Phi = svd.matrixU().leftCols(rank);

  pod.l = std::min<std::size_t>(pod_truncate(sigma_all, eps, rule), static_cast<std::size_t>(rank));
  pod.l = std::max<std::size_t>(pod.l, 1);
  return out;
}

Matrix hipod_online_basis(const PODBasis& pod, std::size_t l, bool with_mean) {
  if (l == 0 || l > static_cast<std::size_t>(pod.Phi.cols()))
    throw std::invalid_argument("hipod_online_basis: basis size out of range");
  const auto lc = static_cast<Eigen::Index>(l);
  if (!with_mean) return pod.Phi.leftCols(lc);
  // The deviation basis cannot represent the snapshot mean, which carries the
  // bulk of the solution; append its orthonormalized residual.
  Vector extra = pod.mean - pod.Phi.leftCols(lc) * (pod.Phi.leftCols(lc).transpose() * pod.mean);
  const double extra_norm = extra.norm();
  if (extra_norm <= 1e-12 * pod.mean.norm()) return pod.Phi.leftCols(lc);
  Matrix B(pod.Phi.rows(), lc + 1);
  B.leftCols(lc) = pod.Phi.leftCols(lc);
  B.col(lc) = extra / extra_norm;
  return B;
}

HipodOnlineOperators hipod_prepare_online(const ProblemSpec& problem, const ModalBasis& basis,
                                          const Grid1D& grid, const PODBasis& pod, std::size_t l,
                                          bool with_mean) {
  if (l == 0 || l > static_cast<std::size_t>(pod.Phi.cols()))
    throw std::invalid_argument("hipod_prepare_online: basis size out of range");
  HipodOnlineOperators ops;
  ops.affine = himod_assemble_affine(problem, basis, grid);
  ops.B = hipod_online_basis(pod, l, with_mean);
  ops.Ad_proj = ops.B.transpose() * ops.affine.A_diff * ops.B;
  ops.Ar_proj = ops.B.transpose() * ops.affine.A_rest * ops.B;
  ops.f0_proj = ops.B.transpose() * ops.affine.f_const;
  ops.f1_proj = ops.B.transpose() * ops.affine.f_mu;
  return ops;
}

namespace {

HiModSolution reconstruct(const Grid1D& grid, const ModalBasis& basis, const Matrix& B,
                          const Vector& u_pod, const std::vector<std::size_t>& constrained,
                          const Vector& constrained_values) {
  Vector full = B * u_pod;
  // The deviation matrix is exactly zero at Dirichlet dofs, so the basis
  // cannot carry the boundary values; reinstate them from the problem data.
  for (std::size_t i = 0; i < constrained.size(); ++i)
    full(static_cast<Eigen::Index>(constrained[i])) =
        constrained_values(static_cast<Eigen::Index>(i));
  return HiModSolution::from_vector(grid, basis, full);
}

}  // namespace

HiModSolution hipod_online_prepared(const HipodOnlineOperators& ops, const Grid1D& grid,
                                    const ModalBasis& basis, double mu_star) {
  const Matrix A = mu_star * ops.Ad_proj + ops.Ar_proj;
  const Vector f = ops.f0_proj + mu_star * ops.f1_proj;
  const Vector u_pod = solve_dense(A, f);
  return reconstruct(grid, basis, ops.B, u_pod, ops.affine.constrained,
                     ops.affine.constrained_values);
}

HiModSolution hipod_online(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           const PODBasis& pod, std::size_t l, double mu_star, HipodAssembly mode,
                           bool with_mean) {
  if (l == 0 || l > static_cast<std::size_t>(pod.Phi.cols()))
    throw std::invalid_argument("hipod_online: basis size out of range");
  const auto iv = problem.mu_interval();
  if (mu_star < iv.mu_min - 1e-12 || mu_star > iv.mu_max + 1e-12)
    throw std::out_of_range("hipod_online: mu outside the parameter interval");

  if (mode == HipodAssembly::Affine) {
    const HipodOnlineOperators ops = hipod_prepare_online(problem, basis, grid, pod, l, with_mean);
    return hipod_online_prepared(ops, grid, basis, mu_star);
  }
  // Literal mode: full reassembly at mu*, then projection.
  const HiModSystem sys = himod_assemble(problem, basis, grid, mu_star);
  const Matrix B = hipod_online_basis(pod, l, with_mean);
  const Matrix A = B.transpose() * sys.A * B;
  const Vector f = B.transpose() * sys.f;
  const Vector u_pod = solve_dense(A, f);
  const auto [constrained, values] = himod_constrained_dofs(problem, basis, grid);
  return reconstruct(grid, basis, B, u_pod, constrained, values);
}

SpeedupReport hipod_speedup_report(const ProblemSpec& problem, const ModalBasis& basis,
                                   const Grid1D& grid, const PODBasis& pod, std::size_t l,
                                   const std::vector<double>& trial_mus,
                                   std::size_t repetitions) {
  if (trial_mus.empty()) throw std::invalid_argument("hipod_speedup_report: empty trial list");
  repetitions = std::max<std::size_t>(repetitions, 5);

  const HipodOnlineOperators prepared = hipod_prepare_online(problem, basis, grid, pod, l);

  using clock = std::chrono::steady_clock;
  auto median_time = [&](auto&& body) {
    std::vector<double> times;
    times.reserve(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
      const auto t0 = clock::now();
      for (double mu : trial_mus) body(mu);
      const auto t1 = clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count() /
                      static_cast<double>(trial_mus.size()));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };

  SpeedupReport report;
  report.trials = trial_mus.size();
  report.himod_seconds_median =
      median_time([&](double mu) { volatile double keep = himod_solve(problem, basis, grid, mu).coeffs(0, 0); (void)keep; });
  report.hipod_affine_seconds_median = median_time([&](double mu) {
    volatile double keep = hipod_online_prepared(prepared, grid, basis, mu).coeffs(0, 0);
    (void)keep;
  });
  report.hipod_literal_seconds_median = median_time([&](double mu) {
    volatile double keep =
        hipod_online(problem, basis, grid, pod, l, mu, HipodAssembly::Literal).coeffs(0, 0);
    (void)keep;
  });
  report.speedup_affine = report.himod_seconds_median / report.hipod_affine_seconds_median;
  report.speedup_literal = report.himod_seconds_median / report.hipod_literal_seconds_median;
  return report;
}

}  // namespace varsep
