#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aitlab/grids_curves.hpp"
#include "aitlab/stochastic_models.hpp"

namespace aitlab {

struct TemporalValueResult {
  enum class Kind { finite, infinite };
  Kind kind = Kind::infinite;
  double d_star = 0.0;    // meaningful only when finite
  double residual = 0.0;  // |f(d_star)| when finite, f(T) when infinite
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;

  bool finite() const noexcept { return kind == Kind::finite; }
};

inline constexpr double kTemporalValueTol = 1e-10;

/// f(d) = two-delay difference with d_stock = d_rate = d, for rate noise `xi`
/// (xi for Vasicek, theta for Hull-White) and mean reversion `a`.
double temporal_value_objective(double horizon, double d, double a, double xi, const Curve& sigma,
                                const TimeGrid& grid);

/// Root of f on (0, T] by bisection, or Infinite when f(T) > 0.
TemporalValueResult temporal_value(double horizon, double a, double xi, const Curve& sigma, const TimeGrid& grid,
                                   double tol = kTemporalValueTol);
TemporalValueResult temporal_value(double horizon, const OUParams& ou, const Curve& sigma, const TimeGrid& grid,
                                   double tol = kTemporalValueTol);
TemporalValueResult temporal_value(double horizon, const HWParams& hw, const Curve& sigma, const TimeGrid& grid,
                                   double tol = kTemporalValueTol);

enum class SweepAxis { a, xi };
std::string axis_name(SweepAxis axis);

struct SweepRow {
  double param_value;
  TemporalValueResult result;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::xi;
  std::string label;  // series label, e.g. "sigma=0.2"
  std::vector<SweepRow> rows;
};

/// n evenly spaced values in [lo, hi]; n == 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, int n);

/// One temporal_value per value of the swept parameter; the other of (a, xi) is fixed.
SweepTable sweep(SweepAxis axis, std::span<const double> values, double fixed_other, double horizon,
                 const Curve& sigma, const TimeGrid& grid, double tol = kTemporalValueTol, unsigned workers = 0,
                 std::string label = {});

/// Header plus rows: param_name,param_value,d_star_or_inf,residual.
std::string sweep_csv(const SweepTable& table);

/// Self-contained SVG line plot; Infinite rows break the line.
std::string sweep_svg(std::span<const SweepTable> tables, const std::string& title = {});

struct FigureFiles {
  std::vector<std::filesystem::path> csv;
  std::filesystem::path svg;
};

/// Writes `<csv_stem>.csv` (one table) or `<csv_stem>_<k>.csv` (several) and the SVG.
FigureFiles emit_figure(std::span<const SweepTable> tables, const std::filesystem::path& csv_stem,
                        const std::filesystem::path& svg_path, const std::string& title = {});

}  // namespace aitlab
