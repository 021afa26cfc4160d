#include "varsep/functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace varsep {

namespace {

std::string kind_name(ScalarFunction1D::Kind kind) {
  switch (kind) {
    case ScalarFunction1D::Kind::Constant: return "constant";
    case ScalarFunction1D::Kind::Polynomial: return "polynomial";
    case ScalarFunction1D::Kind::Sine: return "sine";
    case ScalarFunction1D::Kind::Gaussian: return "gaussian";
    case ScalarFunction1D::Kind::Bubble: return "bubble";
  }
  throw std::logic_error("unreachable");
}

}  // namespace

ScalarFunction1D::ScalarFunction1D(Kind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {}

ScalarFunction1D ScalarFunction1D::constant(double c) { return {Kind::Constant, {c}}; }

ScalarFunction1D ScalarFunction1D::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial: needs at least one coefficient");
  return {Kind::Polynomial, std::move(coeffs)};
}

ScalarFunction1D ScalarFunction1D::sine(double amplitude, double frequency, double phase) {
  return {Kind::Sine, {amplitude, frequency, phase}};
}

ScalarFunction1D ScalarFunction1D::gaussian(double scale, double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
  return {Kind::Gaussian, {scale, center, width}};
}

ScalarFunction1D ScalarFunction1D::bubble(double scale) { return {Kind::Bubble, {scale}}; }

double ScalarFunction1D::operator()(double q) const {
  switch (kind_) {
    case Kind::Constant:
      return params_[0];
    case Kind::Polynomial: {
      double v = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) v = v * q + *it;
      return v;
    }
    case Kind::Sine:
      return params_[0] * std::sin(params_[1] * q + params_[2]);
    case Kind::Gaussian: {
      const double t = (q - params_[1]) / params_[2];
      return params_[0] * std::exp(-t * t);
    }
    case Kind::Bubble:
      return params_[0] * q * (1.0 - q);
  }
  throw std::logic_error("unreachable");
}

bool ScalarFunction1D::is_zero() const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::Gaussian:
    case Kind::Bubble:
    case Kind::Sine:
      return params_[0] == 0.0;
    case Kind::Polynomial:
      for (double c : params_)
        if (c != 0.0) return false;
      return true;
  }
  throw std::logic_error("unreachable");
}

std::string ScalarFunction1D::render() const {
  std::ostringstream out;
  out.precision(17);
  out << kind_name(kind_) << ":";
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i > 0) out << ",";
    out << params_[i];
  }
  return out.str();
}

ScalarFunction1D ScalarFunction1D::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("function spec '" + spec + "' missing ':'");
  const std::string name = spec.substr(0, colon);
  std::vector<double> params;
  std::stringstream rest(spec.substr(colon + 1));
  std::string token;
  while (std::getline(rest, token, ',')) {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
      throw std::runtime_error("bad number '" + token + "' in function spec");
    params.push_back(v);
  }
  auto expect = [&](std::size_t n) {
    if (params.size() != n)
      throw std::runtime_error("function '" + name + "' expects " + std::to_string(n) +
                               " parameters");
  };
  if (name == "constant") {
    expect(1);
    return constant(params[0]);
  }
  if (name == "polynomial") {
    if (params.empty()) throw std::runtime_error("polynomial needs coefficients");
    return polynomial(params);
  }
  if (name == "sine") {
    expect(3);
    return sine(params[0], params[1], params[2]);
  }
  if (name == "gaussian") {
    expect(3);
    return gaussian(params[0], params[1], params[2]);
  }
  if (name == "bubble") {
    expect(1);
    return bubble(params[0]);
  }
  throw std::runtime_error("unknown function kind '" + name + "'");
}

bool SeparableSum::has_mu_factor() const {
  for (const auto& term : terms)
    if (term.fmu) return true;
  return false;
}

double evaluate_separable(const SeparableSum& f, double x, double y, std::optional<double> mu) {
  if (f.has_mu_factor() && !mu)
    throw std::invalid_argument("evaluate_separable: mu required by a term's mu factor");
  double v = 0.0;
  for (const auto& term : f.terms) {
    double t = term.fx(x) * term.fy(y);
    if (term.fmu) t *= (*term.fmu)(*mu);
    v += t;
  }
  return v;
}

}  // namespace varsep
