// varsep-mor: command-line runner for the full-order and reduced-order
// solvers, plus the four canned comparison experiments.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "varsep/fe2d.hpp"
#include "varsep/himod.hpp"
#include "varsep/hipod.hpp"
#include "varsep/io.hpp"
#include "varsep/pgd.hpp"
#include "varsep/pgd_param.hpp"

using namespace varsep;
using nlohmann::json;
using clock_type = std::chrono::steady_clock;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunContext {
  std::string config_path;
  std::string out_dir = ".";
  bool full_reference = false;
  unsigned seed = 20190001;

  json manifest;
  clock_type::time_point run_start = clock_type::now();

  std::string path(const std::string& name) const { return out_dir + "/" + name; }

  void record_file(const std::string& name) { manifest["files"].push_back(name); }

  void record_stage(const std::string& name, double seconds) {
    manifest["stages"][name] = seconds;
  }

  template <typename Fn>
  auto timed(const std::string& stage, Fn&& fn) {
    const auto t0 = clock_type::now();
    auto result = fn();
    record_stage(stage, std::chrono::duration<double>(clock_type::now() - t0).count());
    return result;
  }

  void write_manifest(const std::string& command) {
    manifest["command"] = command;
    manifest["config"] = config_path;
    manifest["seed"] = seed;
    manifest["full_reference"] = full_reference;
    manifest["total_seconds"] =
        std::chrono::duration<double>(clock_type::now() - run_start).count();
    if (!manifest.contains("files")) manifest["files"] = json::array();
    // Write to a scratch name first so the manifest appears atomically.
    const std::string final_path = path("manifest.json");
    const std::string tmp_path = final_path + ".tmp";
    {
      std::ofstream out(tmp_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write manifest: " + tmp_path);
      out << manifest.dump(2) << "\n";
    }
    if (std::rename(tmp_path.c_str(), final_path.c_str()) != 0)
      throw std::runtime_error("cannot finalize manifest: " + final_path);
  }
};

ProblemSpec load_config(const RunContext& ctx) {
  if (ctx.config_path.empty()) throw ConfigError("missing --config");
  ProblemSpec p;
  try {
    p = load_problem(ctx.config_path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  const auto diags = validate_problem(p);
  if (!diags.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& d : diags) msg += "\n  - " + d;
    throw ConfigError(msg);
  }
  return p;
}

Grid2D eval_grid(const ProblemSpec& p, std::size_t nx, std::size_t ny) {
  return {Grid1D(p.x0, p.x1, nx), Grid1D(p.y0, p.y1, ny)};
}

std::vector<double> uniform_samples(double lo, double hi, std::size_t count) {
  std::vector<double> s(count);
  for (std::size_t i = 0; i < count; ++i)
    s[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return s;
}

void emit_field(RunContext& ctx, const Field2D& field, const std::string& stem) {
  write_vtk(field, ctx.path(stem + ".vtk"));
  ctx.record_file(stem + ".vtk");
  write_field_csv(field, ctx.path(stem + ".csv"));
  ctx.record_file(stem + ".csv");
}

// ---------------------------------------------------------------- solve-fe

int run_solve_fe(RunContext& ctx, std::size_t nx, std::size_t ny, double mu_star) {
  const ProblemSpec p = load_config(ctx);
  std::optional<double> mu = p.is_parametric() ? std::optional<double>(mu_star) : std::nullopt;
  const auto result = ctx.timed("solve", [&] { return fe2d_solve(p, eval_grid(p, nx, ny), mu); });
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  emit_field(ctx, result.field, "fe");
  ctx.write_manifest("solve-fe");
  return 0;
}

// ------------------------------------------------------------- solve-himod

int run_solve_himod(RunContext& ctx, std::size_t m, std::size_t nx, std::size_t eval_ny,
                    double mu_star) {
  const ProblemSpec p = load_config(ctx);
  const ModalBasis basis(m);
  const Grid1D grid(p.x0, p.x1, nx);
  std::optional<double> mu = p.is_parametric() ? std::optional<double>(mu_star) : std::nullopt;
  const auto sol = ctx.timed("solve", [&] { return himod_solve(p, basis, grid, mu); });
  write_himod_csv(sol, p, ctx.path("himod_modes.csv"));
  ctx.record_file("himod_modes.csv");
  emit_field(ctx, himod_evaluate(sol, p, eval_grid(p, nx, eval_ny)), "himod");
  ctx.write_manifest("solve-himod");
  return 0;
}

// --------------------------------------------------------------- solve-pgd

int run_solve_pgd(RunContext& ctx, std::size_t nx, std::size_t ny, const PgdOptions& opts) {
  const ProblemSpec p = load_config(ctx);
  const Grid1D gx(p.x0, p.x1, nx), gy(p.y0, p.y1, ny);
  const auto sol = ctx.timed("solve", [&] { return pgd_solve(p, gx, gy, opts); });
  write_pgd_csv(sol, ctx.path("pgd_modes.csv"));
  ctx.record_file("pgd_modes.csv");
  write_ads_report_csv(sol.report, opts.tol_e, opts.tol_fp, ctx.path("pgd_report.csv"));
  ctx.record_file("pgd_report.csv");
  emit_field(ctx, pgd_evaluate(sol, {gx, gy}), "pgd");
  ctx.write_manifest("solve-pgd");
  return 0;
}

// --------------------------------------------------------- solve-pgd-param

int run_solve_pgd_param(RunContext& ctx, std::size_t nx, std::size_t ny, std::size_t nmu,
                        double mu_star, const PgdOptions& opts) {
  const ProblemSpec p = load_config(ctx);
  if (!p.is_parametric()) throw ConfigError("solve-pgd-param needs a parametric problem");
  const auto iv = p.mu_interval();
  const Grid1D gx(p.x0, p.x1, nx), gy(p.y0, p.y1, ny), gmu(iv.mu_min, iv.mu_max, nmu);
  const auto sol = ctx.timed("solve", [&] { return pgd_param_solve(p, gx, gy, gmu, opts); });
  write_pgd_param_csv(sol, ctx.path("pgd_param_modes.csv"));
  ctx.record_file("pgd_param_modes.csv");
  write_ads_report_csv(sol.report, opts.tol_e, opts.tol_fp, ctx.path("pgd_param_report.csv"));
  ctx.record_file("pgd_param_report.csv");
  emit_field(ctx, pgd_param_evaluate(sol, {gx, gy}, mu_star), "pgd_param");
  ctx.write_manifest("solve-pgd-param");
  return 0;
}

// ------------------------------------------------------------ hipod phases

HipodOffline offline_phase(RunContext& ctx, const ProblemSpec& p, const ModalBasis& basis,
                           const Grid1D& grid, std::size_t samples, double eps) {
  const auto iv = p.mu_interval();
  return ctx.timed("offline", [&] {
    return hipod_offline(p, basis, grid, uniform_samples(iv.mu_min, iv.mu_max, samples), eps);
  });
}

int run_hipod_offline(RunContext& ctx, std::size_t m, std::size_t nx, std::size_t samples,
                      double eps) {
  const ProblemSpec p = load_config(ctx);
  if (!p.is_parametric()) throw ConfigError("hipod-offline needs a parametric problem");
  const auto off = offline_phase(ctx, p, ModalBasis(m), Grid1D(p.x0, p.x1, nx), samples, eps);
  write_pod_csv(off.pod, ctx.path("pod.csv"));
  ctx.record_file("pod.csv");
  ctx.manifest["pod_basis_size"] = off.pod.l;
  std::cout << "POD basis size l=" << off.pod.l << "\n";
  ctx.write_manifest("hipod-offline");
  return 0;
}

int run_hipod_online(RunContext& ctx, std::size_t m, std::size_t nx, std::size_t samples,
                     double eps, std::size_t l, double mu_star, std::size_t eval_ny) {
  const ProblemSpec p = load_config(ctx);
  if (!p.is_parametric()) throw ConfigError("hipod-online needs a parametric problem");
  const ModalBasis basis(m);
  const Grid1D grid(p.x0, p.x1, nx);
  const auto off = offline_phase(ctx, p, basis, grid, samples, eps);
  const std::size_t use_l = (l == 0) ? off.pod.l : l;
  const auto sol =
      ctx.timed("online", [&] { return hipod_online(p, basis, grid, off.pod, use_l, mu_star); });
  emit_field(ctx, himod_evaluate(sol, p, eval_grid(p, nx, eval_ny)), "hipod");
  ctx.write_manifest("hipod-online");
  return 0;
}

// ------------------------------------------------------------------- fig1

int run_fig1(RunContext& ctx) {
  const ProblemSpec p = load_config(ctx);
  const std::size_t rnx = ctx.full_reference ? 2500 : 625;
  const std::size_t rny = ctx.full_reference ? 500 : 125;
  const Field2D ref =
      ctx.timed("reference", [&] { return fe2d_solve(p, eval_grid(p, rnx, rny)).field; });

  const Grid1D gx(p.x0, p.x1, 285);
  const auto himod = ctx.timed("himod", [&] { return himod_solve(p, ModalBasis(9), gx); });
  const Field2D himod_field = himod_evaluate(himod, p, ref.grid);

  PgdOptions opts;
  opts.tol_fp = 1e-2;
  opts.fixed_modes = 6;
  opts.max_fp = 50;
  const auto pgd =
      ctx.timed("pgd", [&] { return pgd_solve(p, gx, Grid1D(p.y0, p.y1, 20), opts); });
  const Field2D pgd_field = pgd_evaluate(pgd, ref.grid);

  write_vtk(ref, ctx.path("reference.vtk"));
  ctx.record_file("reference.vtk");
  write_vtk(himod_field, ctx.path("himod.vtk"));
  ctx.record_file("himod.vtk");
  write_vtk(pgd_field, ctx.path("pgd.vtk"));
  ctx.record_file("pgd.vtk");

  CsvTable errors({"method", "relative_l2_error"});
  errors.add_row({"himod_m9", fmt15(relative_l2_error(himod_field, ref))});
  errors.add_row({"pgd_m6", fmt15(relative_l2_error(pgd_field, ref))});
  errors.write(ctx.path("errors.csv"));
  ctx.record_file("errors.csv");
  ctx.write_manifest("fig1");
  return 0;
}

// ----------------------------------------------------------------- table1

int run_table1(RunContext& ctx) {
  const ProblemSpec p = load_config(ctx);
  const Grid1D gx(p.x0, p.x1, 285), gy(p.y0, p.y1, 20);
  CsvTable table({"tol_e", "tol_fp", "m", "fp_iterations", "wall_seconds", "status"});
  for (double tol_e : {2e-2, 8e-3})
    for (double tol_fp : {1e-1, 1e-2, 1e-3}) {
      PgdOptions opts;
      opts.tol_e = tol_e;
      opts.tol_fp = tol_fp;
      opts.max_modes = 20;
      opts.max_fp = 50;
      const auto t0 = clock_type::now();
      std::string status = "ok";
      std::string iters;
      std::size_t m = 0;
      try {
        const auto sol = pgd_solve(p, gx, gy, opts);
        m = sol.modes.size();
        for (const auto& step : sol.report.steps)
          iters += (iters.empty() ? "" : ";") + std::to_string(step.fp_iterations);
      } catch (const NonConvergenceError& e) {
        status = "non-convergent";
      }
      const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
      table.add_row({fmt15(tol_e), fmt15(tol_fp), std::to_string(m), iters, fmt15(secs), status});
    }
  table.write(ctx.path("table1.csv"));
  ctx.record_file("table1.csv");
  ctx.write_manifest("table1");
  return 0;
}

// ------------------------------------------------------------------- fig2

int run_fig2(RunContext& ctx) {
  const ProblemSpec p = load_config(ctx);
  if (!p.is_parametric()) throw ConfigError("fig2 needs a parametric problem");
  const auto iv = p.mu_interval();
  const Grid1D gx(p.x0, p.x1, 150), gy(p.y0, p.y1, 50), gmu(iv.mu_min, iv.mu_max, 500);
  PgdOptions opts;
  opts.tol_fp = 1e-2;
  opts.fixed_modes = 2;
  opts.max_fp = 100;
  const auto sol = ctx.timed("pgd-param", [&] { return pgd_param_solve(p, gx, gy, gmu, opts); });

  CsvTable errors({"mu", "relative_l2_error"});
  for (double mu_star : {1.0, 2.5}) {
    const Field2D ref = ctx.timed("reference-mu" + fmt15(mu_star), [&] {
      return fe2d_solve(p, eval_grid(p, 300, 100), mu_star).field;
    });
    const Field2D approx = pgd_param_evaluate(sol, ref.grid, mu_star);
    const std::string tag = "mu" + fmt15(mu_star);
    write_vtk(ref, ctx.path("reference_" + tag + ".vtk"));
    ctx.record_file("reference_" + tag + ".vtk");
    write_vtk(approx, ctx.path("pgd_param_" + tag + ".vtk"));
    ctx.record_file("pgd_param_" + tag + ".vtk");
    errors.add_row({fmt15(mu_star), fmt15(relative_l2_error(approx, ref))});
  }
  errors.write(ctx.path("errors.csv"));
  ctx.record_file("errors.csv");
  ctx.write_manifest("fig2");
  return 0;
}

// ------------------------------------------------------------------- fig3

int run_fig3(RunContext& ctx) {
  const ProblemSpec p = load_config(ctx);
  if (!p.is_parametric()) throw ConfigError("fig3 needs a parametric problem");
  const ModalBasis basis(15);
  const Grid1D grid(p.x0, p.x1, 50);
  const auto off = offline_phase(ctx, p, basis, grid, 100, 2.5e-15);
  ctx.manifest["pod_basis_size"] = off.pod.l;

  write_pod_csv(off.pod, ctx.path("pod.csv"));
  ctx.record_file("pod.csv");

  const auto iv = p.mu_interval();
  std::mt19937 rng(ctx.seed);
  std::uniform_real_distribution<double> dist(iv.mu_min, iv.mu_max);
  std::vector<double> random_mus(30);
  for (auto& mu : random_mus) mu = dist(rng);

  const Grid2D egrid = eval_grid(p, 150, 50);
  auto error_at = [&](std::size_t l, double mu_star) {
    const auto full = himod_solve(p, basis, grid, mu_star);
    const auto pod = hipod_online(p, basis, grid, off.pod, l, mu_star);
    return relative_l2_error(himod_evaluate(pod, p, egrid), himod_evaluate(full, p, egrid));
  };

  CsvTable table({"l", "mu_star_or_random", "relative_error"});
  const auto t0 = clock_type::now();
  for (std::size_t l : {1, 4, 6, 8}) {
    for (double mu_star : {1.0, 2.5})
      table.add_row({std::to_string(l), fmt15(mu_star), fmt15(error_at(l, mu_star))});
    double mean = 0.0;
    for (double mu : random_mus) mean += error_at(l, mu);
    mean /= static_cast<double>(random_mus.size());
    table.add_row({std::to_string(l), "random", fmt15(mean)});
  }
  ctx.record_stage("online-table", std::chrono::duration<double>(clock_type::now() - t0).count());
  table.write(ctx.path("fig3_table.csv"));
  ctx.record_file("fig3_table.csv");

  const auto speedup = ctx.timed("speedup", [&] {
    return hipod_speedup_report(p, basis, grid, off.pod, off.pod.l, {1.5, 2.5, 3.5, 4.5}, 7);
  });
  CsvTable sp({"himod_seconds_median", "hipod_affine_seconds_median",
               "hipod_literal_seconds_median", "speedup_affine", "speedup_literal", "trials"});
  sp.add_row({fmt15(speedup.himod_seconds_median), fmt15(speedup.hipod_affine_seconds_median),
              fmt15(speedup.hipod_literal_seconds_median), fmt15(speedup.speedup_affine),
              fmt15(speedup.speedup_literal), std::to_string(speedup.trials)});
  sp.write(ctx.path("speedup.csv"));
  ctx.record_file("speedup.csv");
  ctx.write_manifest("fig3");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-order solvers for advection-diffusion on rectangles"};
  app.require_subcommand(1);

  RunContext ctx;
  app.add_option("--config", ctx.config_path, "problem description (INI)")->required(false);
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_flag("--full-reference", ctx.full_reference, "use the fine 2500x500 FE reference");
  app.add_option("--seed", ctx.seed, "seed for randomized parameter draws");

  std::size_t nx = 100, ny = 50, eval_ny = 50, m = 5, nmu = 500, samples = 100, l = 0;
  double mu_star = 2.5, eps = 2.5e-15;
  PgdOptions pgd_opts;
  std::size_t fixed_modes = 0;

  auto* fe = app.add_subcommand("solve-fe", "full-order Q1 solve");
  fe->add_option("--nx", nx);
  fe->add_option("--ny", ny);
  fe->add_option("--mu", mu_star, "parameter value for parametric problems");

  auto* himod = app.add_subcommand("solve-himod", "hierarchical model reduction solve");
  himod->add_option("--m", m, "number of transverse modes");
  himod->add_option("--nx", nx);
  himod->add_option("--eval-ny", eval_ny);
  himod->add_option("--mu", mu_star);

  auto add_pgd_opts = [&](CLI::App* cmd) {
    cmd->add_option("--nx", nx);
    cmd->add_option("--ny", ny);
    cmd->add_option("--tol-e", pgd_opts.tol_e);
    cmd->add_option("--tol-fp", pgd_opts.tol_fp);
    cmd->add_option("--max-modes", pgd_opts.max_modes);
    cmd->add_option("--max-fp", pgd_opts.max_fp);
    cmd->add_option("--modes", fixed_modes, "fixed mode count (0 = adaptive)");
  };
  auto* pgd = app.add_subcommand("solve-pgd", "greedy rank-1 separated solve");
  add_pgd_opts(pgd);
  auto* pgd_param = app.add_subcommand("solve-pgd-param",
                                       "separated solve with the parameter as a coordinate");
  add_pgd_opts(pgd_param);
  pgd_param->add_option("--nmu", nmu);
  pgd_param->add_option("--mu", mu_star, "evaluation parameter for the emitted field");

  auto add_hipod_opts = [&](CLI::App* cmd) {
    cmd->add_option("--m", m);
    cmd->add_option("--nx", nx);
    cmd->add_option("--samples", samples);
    cmd->add_option("--eps", eps);
  };
  auto* hoff = app.add_subcommand("hipod-offline", "snapshot collection and POD basis");
  add_hipod_opts(hoff);
  auto* hon = app.add_subcommand("hipod-online", "projected online solve at one parameter");
  add_hipod_opts(hon);
  hon->add_option("--l", l, "basis size (0 = truncation rule)");
  hon->add_option("--mu", mu_star);
  hon->add_option("--eval-ny", eval_ny);

  auto* fig1 = app.add_subcommand("fig1", "qualitative comparison of both reductions");
  auto* table1 = app.add_subcommand("table1", "tolerance sweep of the greedy solver");
  auto* fig2 = app.add_subcommand("fig2", "parametric separated solve vs FE references");
  auto* fig3 = app.add_subcommand("fig3", "POD error table and speedup");

  // Experiment defaults differ from the generic solves.
  m = 5;

  // Accept --config/--out/--seed after the subcommand name as well.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(ctx.out_dir);
    if (fixed_modes > 0) pgd_opts.fixed_modes = fixed_modes;
    if (fe->parsed()) return run_solve_fe(ctx, nx, ny, mu_star);
    if (himod->parsed()) return run_solve_himod(ctx, m, nx, eval_ny, mu_star);
    if (pgd->parsed()) return run_solve_pgd(ctx, nx, ny, pgd_opts);
    if (pgd_param->parsed()) return run_solve_pgd_param(ctx, nx, ny, nmu, mu_star, pgd_opts);
    if (hoff->parsed()) return run_hipod_offline(ctx, m, nx, samples, eps);
    if (hon->parsed()) return run_hipod_online(ctx, m, nx, samples, eps, l, mu_star, eval_ny);
    if (fig1->parsed()) return run_fig1(ctx);
    if (table1->parsed()) return run_table1(ctx);
    if (fig2->parsed()) return run_fig2(ctx);
    if (fig3->parsed()) return run_fig3(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
