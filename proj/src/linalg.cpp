#include "varsep/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

namespace varsep {

Vector solve_dense(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve_dense: matrix must be square");
  if (b.size() != A.rows()) throw std::invalid_argument("solve_dense: size mismatch");
  Eigen::PartialPivLU<Matrix> lu(A);
  const Matrix& U = lu.matrixLU();
  const double scale = A.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    if (std::abs(U(i, i)) < 1e-14 * scale) {
      throw SingularMatrixError("solve_dense: numerically singular pivot");
    }
  }
  return lu.solve(b);
}

EigenDecomposition sym_eigen_descending(const Matrix& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("sym_eigen_descending: matrix must be square");
  const double norm = G.norm();
  if ((G - G.transpose()).norm() > 1e-12 * std::max(norm, 1e-300)) {
    throw std::invalid_argument("sym_eigen_descending: input not symmetric within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(G);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eigen_descending: eigen-decomposition failed");
  }
  // Eigen sorts ascending; flip.
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

}  // namespace varsep
