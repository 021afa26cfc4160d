#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "varsep/himod.hpp"
#include "varsep/types.hpp"

namespace varsep {

struct SnapshotSet {
  std::vector<double> samples;
  Matrix S;  // m*N_h x P, column i = flattened solution for samples[i]
};

enum class PodTruncation {
  KeepAtOrAbove,  // l = #{ sigma_i^2 >= eps }, clamped >= 1
  FirstBelow,     // l = smallest i with sigma_i^2 < eps (literal reading)
};

struct PODBasis {
  Vector mean;    // column average of S
  Matrix Phi;     // m*N_h x rank, orthonormal deviation directions
  Vector sigma;   // full singular value list, descending
  std::size_t l = 1;
  double eps = 0.0;
  std::vector<std::string> diagnostics;
};

std::size_t pod_truncate(const Vector& sigma, double eps,
                         PodTruncation rule = PodTruncation::KeepAtOrAbove);

struct HipodOffline {
  SnapshotSet snapshots;
  PODBasis pod;
};

/// Offline phase: HiMod snapshots over the parameter samples, mean-centering,
/// thin SVD of the deviation matrix, truncation by the sigma^2-vs-eps rule.
HipodOffline hipod_offline(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           const std::vector<double>& samples, double eps,
                           PodTruncation rule = PodTruncation::KeepAtOrAbove);

/// The basis actually used online: the first l deviation directions, plus the
/// orthonormalized residual of the snapshot mean when `with_mean` is set (the
/// default; the deviation directions alone cannot represent the mean).
Matrix hipod_online_basis(const PODBasis& pod, std::size_t l, bool with_mean = true);

enum class HipodAssembly {
  Literal,  // full reassembly at mu*, then projection
  Affine,   // mu* combination of precomputed projected blocks
};

/// Precomputed projected operators for the affine online path.
struct HipodOnlineOperators {
  Matrix B;        // online basis (see hipod_online_basis)
  Matrix Ad_proj;  // B^T A_diff B
  Matrix Ar_proj;  // B^T A_rest B
  Vector f0_proj, f1_proj;
  HiModAffineSystem affine;  // kept for constrained-value reinstatement
};

HipodOnlineOperators hipod_prepare_online(const ProblemSpec& problem, const ModalBasis& basis,
                                          const Grid1D& grid, const PODBasis& pod, std::size_t l,
                                          bool with_mean = true);

/// Online phase: Galerkin projection onto the online basis at mu*,
/// reconstruction B * u_POD with the known Dirichlet values reinstated.
HiModSolution hipod_online(const ProblemSpec& problem, const ModalBasis& basis, const Grid1D& grid,
                           const PODBasis& pod, std::size_t l, double mu_star,
                           HipodAssembly mode = HipodAssembly::Affine, bool with_mean = true);

HiModSolution hipod_online_prepared(const HipodOnlineOperators& ops, const Grid1D& grid,
                                    const ModalBasis& basis, double mu_star);

struct SpeedupReport {
  double himod_seconds_median = 0.0;
  double hipod_affine_seconds_median = 0.0;
  double hipod_literal_seconds_median = 0.0;
  double speedup_affine = 0.0;
  double speedup_literal = 0.0;
  std::size_t trials = 0;
};

/// Median wall time over the trial list, >= `repetitions` timer repetitions.
SpeedupReport hipod_speedup_report(const ProblemSpec& problem, const ModalBasis& basis,
                                   const Grid1D& grid, const PODBasis& pod, std::size_t l,
                                   const std::vector<double>& trial_mus,
                                   std::size_t repetitions = 5);

}  // namespace varsep
