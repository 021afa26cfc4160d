#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "varsep/functions.hpp"

namespace varsep {

enum class Side { Left, Right, Top, Bottom };

/// Boundary condition on one side of the rectangle. Dirichlet data is given
/// in the side's tangential coordinate (y for left/right, x for top/bottom).
struct BoundaryCondition {
  enum class Kind { Dirichlet, NeumannHomogeneous };
  Kind kind = Kind::Dirichlet;
  ScalarFunction1D g = ScalarFunction1D::constant(0.0);

  static BoundaryCondition dirichlet(ScalarFunction1D data) {
    return {Kind::Dirichlet, std::move(data)};
  }
  static BoundaryCondition dirichlet_zero() { return dirichlet(ScalarFunction1D::constant(0.0)); }
  static BoundaryCondition neumann0() {
    return {Kind::NeumannHomogeneous, ScalarFunction1D::constant(0.0)};
  }

  bool is_dirichlet() const { return kind == Kind::Dirichlet; }
  bool is_homogeneous_dirichlet() const { return is_dirichlet() && g.is_zero(); }
  bool operator==(const BoundaryCondition&) const = default;
};

struct BoundarySpec {
  BoundaryCondition left = BoundaryCondition::dirichlet_zero();
  BoundaryCondition right = BoundaryCondition::dirichlet_zero();
  BoundaryCondition top = BoundaryCondition::dirichlet_zero();
  BoundaryCondition bottom = BoundaryCondition::dirichlet_zero();

  const BoundaryCondition& side(Side s) const;
  bool operator==(const BoundarySpec&) const = default;
};

struct ParamInterval {
  double mu_min = 1.0;
  double mu_max = 5.0;
  bool operator==(const ParamInterval&) const = default;
};

/// Advection-diffusion problem -div(mu grad u) + b . grad u = f on a
/// rectangle, with mu either a fixed positive constant or a parameter
/// interval (mu multiplies the diffusion term only).
struct ProblemSpec {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  std::variant<double, ParamInterval> mu = 1.0;
  double bx = 0.0, by = 0.0;
  SeparableSum f;
  BoundarySpec bc;

  bool is_parametric() const { return std::holds_alternative<ParamInterval>(mu); }
  double mu_constant() const { return std::get<double>(mu); }
  ParamInterval mu_interval() const { return std::get<ParamInterval>(mu); }
  /// Copy with the parameter fixed to a concrete value.
  ProblemSpec with_mu(double mu_star) const;

  double length_x() const { return x1 - x0; }
  double length_y() const { return y1 - y0; }

  bool operator==(const ProblemSpec&) const = default;
};

/// Invariant and solver-compatibility diagnostics; empty means valid.
std::vector<std::string> validate_problem(const ProblemSpec& p);

/// INI-style config round trip. parse_problem throws std::runtime_error with
/// a line number on malformed or unknown keys.
std::string render_problem(const ProblemSpec& p);
ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem(const std::string& path);

}  // namespace varsep
