#include "varsep/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace varsep {

namespace {

std::ofstream open_out(const std::string& path) {
  // Binary mode keeps LF endings on every platform.
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void write_vtk(const Field2D& field, const std::string& path, const std::string& name) {
  auto out = open_out(path);
  const std::size_t nx = field.grid.x.n_nodes();
  const std::size_t ny = field.grid.y.n_nodes();
  out << "# vtk DataFile Version 3.0\n";
  out << "scalar field\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << nx << " " << ny << " 1\n";
  out << "ORIGIN " << fmt15(field.grid.x.a) << " " << fmt15(field.grid.y.a) << " 0\n";
  out << "SPACING " << fmt15(field.grid.x.h()) << " " << fmt15(field.grid.y.h()) << " 1\n";
  out << "POINT_DATA " << nx * ny << "\n";
  out << "SCALARS " << name << " double 1\n";
  out << "LOOKUP_TABLE default\n";
  // VTK structured-points ordering: x varies fastest.
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) out << fmt15(field.at(ix, iy)) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_field_csv(const Field2D& field, const std::string& path) {
  auto out = open_out(path);
  out << "x,y,value\n";
  for (std::size_t ix = 0; ix < field.grid.x.n_nodes(); ++ix)
    for (std::size_t iy = 0; iy < field.grid.y.n_nodes(); ++iy)
      out << fmt15(field.grid.x.node(ix)) << "," << fmt15(field.grid.y.node(iy)) << ","
          << fmt15(field.at(ix, iy)) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_himod_csv(const HiModSolution& sol, const ProblemSpec& problem,
                     const std::string& path) {
  auto out = open_out(path);
  out << "# m=" << sol.basis.m << " n_nodes=" << sol.grid.n_nodes() << " domain=["
      << fmt15(problem.x0) << "," << fmt15(problem.x1) << "]x[" << fmt15(problem.y0) << ","
      << fmt15(problem.y1) << "]\n";
  out << "mode,x,coefficient\n";
  for (std::size_t k = 0; k < sol.basis.m; ++k)
    for (std::size_t i = 0; i < sol.grid.n_nodes(); ++i)
      out << (k + 1) << "," << fmt15(sol.grid.node(i)) << ","
          << fmt15(sol.coeffs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)))
          << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

void write_axis_rows(std::ofstream& out, std::size_t mode, const char* axis, const Grid1D& grid,
                     const Vector& values) {
  for (std::size_t i = 0; i < grid.n_nodes(); ++i)
    out << mode << "," << axis << "," << fmt15(grid.node(i)) << ","
        << fmt15(values(static_cast<Eigen::Index>(i))) << "\n";
}

}  // namespace

void write_pgd_csv(const PGDSolution& sol, const std::string& path) {
  auto out = open_out(path);
  out << "# m=" << sol.modes.size() << " n_x=" << sol.x_grid.n_nodes()
      << " n_y=" << sol.y_grid.n_nodes() << "\n";
  out << "mode,axis,coordinate,value\n";
  if (sol.lift) {
    write_axis_rows(out, 0, "x", sol.x_grid, sol.lift->ux);
    write_axis_rows(out, 0, "y", sol.y_grid, sol.lift->uy);
  }
  for (std::size_t m = 0; m < sol.modes.size(); ++m) {
    write_axis_rows(out, m + 1, "x", sol.x_grid, sol.modes[m].ux);
    write_axis_rows(out, m + 1, "y", sol.y_grid, sol.modes[m].uy);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_pgd_param_csv(const PGDParamSolution& sol, const std::string& path) {
  auto out = open_out(path);
  out << "# m=" << sol.modes.size() << " n_x=" << sol.x_grid.n_nodes()
      << " n_y=" << sol.y_grid.n_nodes() << " n_mu=" << sol.mu_grid.n_nodes()
      << " mu_min=" << fmt15(sol.mu_grid.a) << " mu_max=" << fmt15(sol.mu_grid.b) << "\n";
  out << "mode,axis,coordinate,value\n";
  if (sol.lift) {
    write_axis_rows(out, 0, "x", sol.x_grid, sol.lift->ux);
    write_axis_rows(out, 0, "y", sol.y_grid, sol.lift->uy);
    write_axis_rows(out, 0, "mu", sol.mu_grid, sol.lift->umu);
  }
  for (std::size_t m = 0; m < sol.modes.size(); ++m) {
    write_axis_rows(out, m + 1, "x", sol.x_grid, sol.modes[m].ux);
    write_axis_rows(out, m + 1, "y", sol.y_grid, sol.modes[m].uy);
    write_axis_rows(out, m + 1, "mu", sol.mu_grid, sol.modes[m].umu);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_ads_report_csv(const ADSReport& report, double tol_e, double tol_fp,
                          const std::string& path) {
  auto out = open_out(path);
  out << "tol_e,tol_fp,mode_index,fp_iterations,final_increment,enrichment_ratio\n";
  for (const auto& step : report.steps)
    out << fmt15(tol_e) << "," << fmt15(tol_fp) << "," << step.mode_index << ","
        << step.fp_iterations << "," << fmt15(step.final_increment) << ","
        << fmt15(step.enrichment_ratio) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_pod_csv(const PODBasis& pod, const std::string& path) {
  auto out = open_out(path);
  out << "index,sigma,sigma_squared,retained\n";
  for (Eigen::Index i = 0; i < pod.sigma.size(); ++i) {
    const double s = pod.sigma(i);
    out << (i + 1) << "," << fmt15(s) << "," << fmt15(s * s) << ","
        << (static_cast<std::size_t>(i) < pod.l ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CsvTable: row width does not match header");
  rows_.push_back(cells);
}

void CsvTable::write(const std::string& path) const {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header_.size(); ++i)
    out << header_[i] << (i + 1 == header_.size() ? "\n" : ",");
  for (const auto& row : rows_)
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 == row.size() ? "\n" : ",");
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace varsep
