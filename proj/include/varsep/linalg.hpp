#pragma once

#include <stdexcept>
#include <utility>

#include "varsep/types.hpp"

namespace varsep {

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solves A x = b by LU with row pivoting. Throws SingularMatrixError when a
/// pivot falls below 1e-14 * max|A|.
Vector solve_dense(const Matrix& A, const Vector& b);

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted descending.
/// Rejects input asymmetric beyond 1e-12 relative.
EigenDecomposition sym_eigen_descending(const Matrix& G);

}  // namespace varsep
