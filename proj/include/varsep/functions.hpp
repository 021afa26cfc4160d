#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varsep/types.hpp"

namespace varsep {

/// One-dimensional function from a small predefined catalog. Keeping the
/// catalog closed makes problem configs auditable and every experiment in
/// scope expressible.
class ScalarFunction1D {
 public:
  enum class Kind { Constant, Polynomial, Sine, Gaussian, Bubble };

  static ScalarFunction1D constant(double c);
  /// coeffs in ascending degree order: c0 + c1 q + c2 q^2 + ...
  static ScalarFunction1D polynomial(std::vector<double> coeffs);
  /// amplitude * sin(frequency * q + phase)
  static ScalarFunction1D sine(double amplitude, double frequency, double phase);
  /// scale * exp(-((q - center)/width)^2), width > 0
  static ScalarFunction1D gaussian(double scale, double center, double width);
  /// scale * q * (1 - q)
  static ScalarFunction1D bubble(double scale);

  double operator()(double q) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  bool is_zero() const;

  /// Catalog spelling "kind:p1,p2,...", e.g. "gaussian:50,2.85,0.075".
  std::string render() const;
  static ScalarFunction1D parse(const std::string& spec);

  bool operator==(const ScalarFunction1D&) const = default;

 private:
  ScalarFunction1D(Kind kind, std::vector<double> params);
  Kind kind_;
  std::vector<double> params_;
};

/// Sum of separable terms f(x,y[,mu]) = sum_r fx_r(x) fy_r(y) [fmu_r(mu)].
struct SeparableTerm {
  ScalarFunction1D fx;
  ScalarFunction1D fy;
  std::optional<ScalarFunction1D> fmu;

  bool operator==(const SeparableTerm&) const = default;
};

struct SeparableSum {
  std::vector<SeparableTerm> terms;

  bool has_mu_factor() const;
  bool operator==(const SeparableSum&) const = default;
};

/// Pointwise evaluation; mu must be supplied iff the terms carry a mu factor.
double evaluate_separable(const SeparableSum& f, double x, double y,
                          std::optional<double> mu = std::nullopt);

}  // namespace varsep
