#include "varsep/problem.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace varsep {

const BoundaryCondition& BoundarySpec::side(Side s) const {
  switch (s) {
    case Side::Left: return left;
    case Side::Right: return right;
    case Side::Top: return top;
    case Side::Bottom: return bottom;
  }
  throw std::logic_error("unreachable");
}

ProblemSpec ProblemSpec::with_mu(double mu_star) const {
  ProblemSpec fixed = *this;
  fixed.mu = mu_star;
  // Drop mu factors by evaluating them at mu_star.
  for (auto& term : fixed.f.terms) {
    if (term.fmu) {
      const double scale = (*term.fmu)(mu_star);
      term.fx = [&] {
        if (term.fx.kind() == ScalarFunction1D::Kind::Constant)
          return ScalarFunction1D::constant(term.fx.params()[0] * scale);
        std::vector<double> p = term.fx.params();
        // Fold the scale into the leading parameter; every catalog kind
        // scales linearly in its first parameter except polynomial.
        if (term.fx.kind() == ScalarFunction1D::Kind::Polynomial) {
          for (double& c : p) c *= scale;
          return ScalarFunction1D::polynomial(p);
        }
        p[0] *= scale;
        switch (term.fx.kind()) {
          case ScalarFunction1D::Kind::Sine: return ScalarFunction1D::sine(p[0], p[1], p[2]);
          case ScalarFunction1D::Kind::Gaussian:
            return ScalarFunction1D::gaussian(p[0], p[1], p[2]);
          case ScalarFunction1D::Kind::Bubble: return ScalarFunction1D::bubble(p[0]);
          default: break;
        }
        throw std::logic_error("unreachable");
      }();
      term.fmu.reset();
    }
  }
  return fixed;
}

std::vector<std::string> validate_problem(const ProblemSpec& p) {
  std::vector<std::string> diag;
  if (!(p.x0 < p.x1)) diag.push_back("empty x-extent: x0 must be below x1");
  if (!(p.y0 < p.y1)) diag.push_back("empty y-extent: y0 must be below y1");
  if (p.is_parametric()) {
    const auto iv = p.mu_interval();
    if (!(iv.mu_min > 0.0) || !(iv.mu_min < iv.mu_max))
      diag.push_back("nonpositive diffusivity or empty parameter interval");
  } else if (!(p.mu_constant() > 0.0)) {
    diag.push_back("nonpositive diffusivity");
  }
  const bool any_dirichlet = p.bc.left.is_dirichlet() || p.bc.right.is_dirichlet() ||
                             p.bc.top.is_dirichlet() || p.bc.bottom.is_dirichlet();
  if (!any_dirichlet) diag.push_back("no Dirichlet side: pure-Neumann problem is ill-posed");

  // Sine transverse basis vanishes at the lateral boundaries, so HiMod needs
  // homogeneous Dirichlet data on top and bottom.
  for (Side s : {Side::Top, Side::Bottom}) {
    const auto& bc = p.bc.side(s);
    if (bc.is_dirichlet() && !bc.is_homogeneous_dirichlet())
      diag.push_back("basis incompatible with lateral data");
  }
  // The rank-1 PGD lift needs inlet data compatible with the lateral Dirichlet
  // conditions at the corners.
  for (Side s : {Side::Left, Side::Right}) {
    const auto& bc = p.bc.side(s);
    if (!bc.is_dirichlet() || bc.is_homogeneous_dirichlet()) continue;
    const double g0 = bc.g(p.y0), g1 = bc.g(p.y1);
    if (p.bc.bottom.is_homogeneous_dirichlet() && std::abs(g0) > 1e-14)
      diag.push_back("inlet data does not vanish at the bottom Dirichlet corner");
    if (p.bc.top.is_homogeneous_dirichlet() && std::abs(g1) > 1e-14)
      diag.push_back("inlet data does not vanish at the top Dirichlet corner");
  }
  for (const auto& term : p.f.terms) {
    if (term.fmu && !p.is_parametric())
      diag.push_back("forcing carries a mu factor but the problem is not parametric");
  }
  return diag;
}

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string render_bc(const BoundaryCondition& bc) {
  if (!bc.is_dirichlet()) return "neumann0";
  return "dirichlet:" + bc.g.render();
}

BoundaryCondition parse_bc(const std::string& value) {
  if (value == "neumann0") return BoundaryCondition::neumann0();
  const std::string prefix = "dirichlet:";
  if (value.rfind(prefix, 0) == 0)
    return BoundaryCondition::dirichlet(ScalarFunction1D::parse(value.substr(prefix.size())));
  throw std::runtime_error("bad boundary condition '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string render_problem(const ProblemSpec& p) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "x0 = " << fmt(p.x0) << "\n";
  out << "x1 = " << fmt(p.x1) << "\n";
  out << "y0 = " << fmt(p.y0) << "\n";
  out << "y1 = " << fmt(p.y1) << "\n";
  out << "[coefficients]\n";
  if (p.is_parametric()) {
    const auto iv = p.mu_interval();
    out << "mu_min = " << fmt(iv.mu_min) << "\n";
    out << "mu_max = " << fmt(iv.mu_max) << "\n";
  } else {
    out << "mu = " << fmt(p.mu_constant()) << "\n";
  }
  out << "bx = " << fmt(p.bx) << "\n";
  out << "by = " << fmt(p.by) << "\n";
  out << "[forcing]\n";
  out << "term_count = " << p.f.terms.size() << "\n";
  for (std::size_t i = 0; i < p.f.terms.size(); ++i) {
    const auto& term = p.f.terms[i];
    const std::string tag = "term" + std::to_string(i + 1);
    const auto emit = [&](const std::string& axis, const ScalarFunction1D& fn) {
      const std::string spec = fn.render();
      const auto colon = spec.find(':');
      out << tag << "_" << axis << "_kind = " << spec.substr(0, colon) << "\n";
      out << tag << "_" << axis << "_params = " << spec.substr(colon + 1) << "\n";
    };
    emit("fx", term.fx);
    emit("fy", term.fy);
    if (term.fmu) emit("fmu", *term.fmu);
  }
  out << "[bc]\n";
  out << "left = " << render_bc(p.bc.left) << "\n";
  out << "right = " << render_bc(p.bc.right) << "\n";
  out << "top = " << render_bc(p.bc.top) << "\n";
  out << "bottom = " << render_bc(p.bc.bottom) << "\n";
  return out.str();
}

ProblemSpec parse_problem(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> kv;  // section.key -> (value, line)
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw std::runtime_error("line " + std::to_string(lineno) + ": bad section header");
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty())
      throw std::runtime_error("line " + std::to_string(lineno) + ": key outside a section");
    kv[section + "." + key] = {value, lineno};
  }

  auto fail = [](int at, const std::string& what) -> double {
    throw std::runtime_error("line " + std::to_string(at) + ": " + what);
  };
  auto take = [&](const std::string& name) {
    auto it = kv.find(name);
    if (it == kv.end()) throw std::runtime_error("missing key '" + name + "'");
    auto entry = it->second;
    kv.erase(it);
    return entry;
  };
  auto take_double = [&](const std::string& name) {
    auto [value, at] = take(name);
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) fail(at, "bad number '" + value + "'");
      return v;
    } catch (const std::invalid_argument&) {
      return fail(at, "bad number '" + value + "'");
    }
  };

  ProblemSpec p;
  p.x0 = take_double("domain.x0");
  p.x1 = take_double("domain.x1");
  p.y0 = take_double("domain.y0");
  p.y1 = take_double("domain.y1");
  if (kv.count("coefficients.mu")) {
    p.mu = take_double("coefficients.mu");
  } else {
    ParamInterval iv;
    iv.mu_min = take_double("coefficients.mu_min");
    iv.mu_max = take_double("coefficients.mu_max");
    p.mu = iv;
  }
  p.bx = take_double("coefficients.bx");
  p.by = take_double("coefficients.by");

  const auto n_terms = static_cast<std::size_t>(take_double("forcing.term_count"));
  for (std::size_t i = 1; i <= n_terms; ++i) {
    const std::string tag = "forcing.term" + std::to_string(i);
    auto read_fn = [&](const std::string& axis) {
      auto [kind, at] = take(tag + "_" + axis + "_kind");
      auto [params, at2] = take(tag + "_" + axis + "_params");
      (void)at2;
      try {
        return ScalarFunction1D::parse(kind + ":" + params);
      } catch (const std::exception& e) {
        fail(at, e.what());
        throw;  // unreachable
      }
    };
    SeparableTerm term{read_fn("fx"), read_fn("fy"), std::nullopt};
    if (kv.count(tag + "_fmu_kind")) term.fmu = read_fn("fmu");
    p.f.terms.push_back(std::move(term));
  }

  auto read_bc = [&](const std::string& name) {
    auto [value, at] = take("bc." + name);
    try {
      return parse_bc(value);
    } catch (const std::exception& e) {
      fail(at, e.what());
      throw;  // unreachable
    }
  };
  p.bc.left = read_bc("left");
  p.bc.right = read_bc("right");
  p.bc.top = read_bc("top");
  p.bc.bottom = read_bc("bottom");

  if (!kv.empty()) {
    const auto& [name, entry] = *kv.begin();
    throw std::runtime_error("line " + std::to_string(entry.second) + ": unknown key '" + name +
                             "'");
  }
  return p;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace varsep
