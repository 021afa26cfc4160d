#include "varsep/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace varsep {

namespace {

// Legendre polynomial P_n and derivative at x, by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const double nn = static_cast<double>(n);
  const double dp = nn * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: point count must be >= 1");
  QuadratureRule rule;
  rule.nodes = Vector::Zero(static_cast<Eigen::Index>(n));
  rule.weights = Vector::Zero(static_cast<Eigen::Index>(n));
  if (n == 1) {
    rule.nodes(0) = 0.0;
    rule.weights(0) = 2.0;
    return rule;
  }
  for (std::size_t i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, refined by Newton to 1e-14.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      std::tie(p, dp) = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-14) break;
    }
    std::tie(p, dp) = legendre(n, x);
    rule.nodes(static_cast<Eigen::Index>(i)) = x;
    rule.weights(static_cast<Eigen::Index>(i)) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // The cosine guess walks right to left; store ascending.
  if (rule.nodes(0) > rule.nodes(rule.nodes.size() - 1)) {
    rule.nodes.reverseInPlace();
    rule.weights.reverseInPlace();
  }
  return rule;
}

MappedQuadrature map_to_interval(const QuadratureRule& rule, double a, double b) {
  MappedQuadrature mapped;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  mapped.points = (rule.nodes.array() * half + mid).matrix();
  mapped.weights = rule.weights * half;
  return mapped;
}

MappedQuadrature composite_gauss(double a, double b, std::size_t panels,
                                 std::size_t points_per_panel) {
  if (panels == 0) throw std::invalid_argument("composite_gauss: panels must be >= 1");
  const QuadratureRule base = gauss_legendre(points_per_panel);
  const auto n = static_cast<Eigen::Index>(panels * points_per_panel);
  MappedQuadrature out{Vector(n), Vector(n)};
  const double h = (b - a) / static_cast<double>(panels);
  Eigen::Index pos = 0;
  for (std::size_t p = 0; p < panels; ++p) {
    const auto panel = map_to_interval(base, a + h * static_cast<double>(p),
                                       a + h * static_cast<double>(p + 1));
    out.points.segment(pos, panel.points.size()) = panel.points;
    out.weights.segment(pos, panel.weights.size()) = panel.weights;
    pos += panel.points.size();
  }
  return out;
}

}  // namespace varsep
