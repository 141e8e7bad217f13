#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aitlab/cli/config.hpp"

namespace aitlab::cli {

enum ExitCode : int { kExitOk = 0, kExitTolerance = 1, kExitInvalidConfig = 2, kExitInadmissible = 3 };

struct CommandOptions {
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;  // overrides [mc] seed
  std::filesystem::path out_dir = ".";
};

/// Slack added to 3 SE for the trapezoid error of the closed forms.
inline constexpr double kQuadratureTol = 1e-6;

/// One MC-vs-closed-form line. Empty closed_form means none is available.
struct CompareRow {
  std::string model;
  std::string strategy;  // merton, ait or delta
  double d_stock = 0.0;
  double d_rate = 0.0;
  McEstimate mc;
  std::optional<double> closed_form;
  double closed_form_se = 0.0;

  double combined_se() const;
  std::optional<double> abs_diff() const;
  std::optional<double> diff_in_se() const;
  bool within_tolerance() const;
};

inline const std::vector<std::string> kCompareColumns = {
    "model", "strategy", "d_stock", "d_rate", "n_paths", "n_steps", "seed",
    "mean",  "std_error", "closed_form", "abs_diff", "diff_in_se"};

std::vector<CompareRow> compare_rows(const ExperimentConfig& cfg, unsigned workers);
std::vector<CompareRow> simulate_rows(const ExperimentConfig& cfg, unsigned workers);

/// Formatted cells; the same strings go to the CSV and the console.
std::vector<std::string> row_cells(const CompareRow& row);
std::string rows_csv(const std::vector<CompareRow>& rows);
std::string rows_table(const std::vector<CompareRow>& rows);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// The identity/invariant suite behind `validate`.
std::vector<CheckResult> validation_suite(std::uint64_t seed, unsigned workers);

int run_validate(const CommandOptions& opts, std::ostream& out);
int run_compare(ExperimentConfig cfg, const CommandOptions& opts, std::ostream& out);
int run_simulate(ExperimentConfig cfg, const CommandOptions& opts, std::ostream& out);
int run_temporal_value(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& out);
int run_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& out);

}  // namespace aitlab::cli
