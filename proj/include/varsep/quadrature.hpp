#pragma once

#include <cstddef>
#include <vector>

#include "varsep/types.hpp"

namespace varsep {

/// Gauss-Legendre rule on the reference interval [-1,1].
struct QuadratureRule {
  Vector nodes;    // strictly increasing in (-1,1)
  Vector weights;  // positive, summing to 2

  std::size_t size() const { return static_cast<std::size_t>(nodes.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree <= 2n-1.
/// Nodes are computed by Newton iteration on the Legendre polynomial.
QuadratureRule gauss_legendre(std::size_t n);

/// A quadrature rule mapped onto an arbitrary interval [a,b].
struct MappedQuadrature {
  Vector points;
  Vector weights;
};

MappedQuadrature map_to_interval(const QuadratureRule& rule, double a, double b);

/// Composite rule on [a,b]: `points_per_panel`-point Gauss on each of
/// `panels` equal subintervals. Used for oscillatory or sharply peaked
/// transverse integrands where a single panel is not enough.
MappedQuadrature composite_gauss(double a, double b, std::size_t panels,
                                 std::size_t points_per_panel);

}  // namespace varsep
