#pragma once

#include <string>
#include <vector>

#include "varsep/grid.hpp"
#include "varsep/himod.hpp"
#include "varsep/hipod.hpp"
#include "varsep/pgd.hpp"
#include "varsep/pgd_param.hpp"

namespace varsep {

/// Legacy VTK STRUCTURED_POINTS, ASCII, one double scalar per point.
void write_vtk(const Field2D& field, const std::string& path, const std::string& name = "u");

/// CSV rows x,y,value in x-major order, 15 significant digits, LF endings.
void write_field_csv(const Field2D& field, const std::string& path);

void write_himod_csv(const HiModSolution& sol, const ProblemSpec& problem,
                     const std::string& path);
void write_pgd_csv(const PGDSolution& sol, const std::string& path);
void write_pgd_param_csv(const PGDParamSolution& sol, const std::string& path);
void write_ads_report_csv(const ADSReport& report, double tol_e, double tol_fp,
                          const std::string& path);
void write_pod_csv(const PODBasis& pod, const std::string& path);

/// Formats a double with 15 significant digits.
std::string fmt15(double v);

/// Simple CSV table accumulator: header once, rows appended, written at end.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void write(const std::string& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace varsep
