#include "aitlab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "aitlab/closed_forms.hpp"
#include "aitlab/forward_mc.hpp"
#include "aitlab/temporal_value.hpp"

namespace aitlab::cli {
namespace {

// The embedded Heston MC for the closed form must not reuse the engine's paths.
constexpr std::uint64_t kClosedFormSeedSalt = 0x243F6A8885A308D3ull;

std::string cell(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string cell(const std::optional<double>& x) { return x ? cell(*x) : std::string(); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw InvalidArgument("failed writing " + path.string());
}

std::filesystem::path output_path(const CommandOptions& opts, const std::string& configured, const char* fallback) {
  return opts.out_dir / (configured.empty() ? std::string(fallback) : configured);
}

void apply_overrides(ExperimentConfig& cfg, const CommandOptions& opts) {
  if (opts.seed) cfg.mc.seed = *opts.seed;
  cfg.mc.workers = opts.workers;
}

void require_gaussian_rate(const ExperimentConfig& cfg, const char* command) {
  if (cfg.model_kind != "vasicek" && cfg.model_kind != "hull_white") {
    throw ConfigError(std::string(command) + " needs model kind vasicek or hull_white, got " + cfg.model_kind);
  }
}

std::vector<CompareRow> mc_rows(const ExperimentConfig& cfg, unsigned workers, bool with_closed_forms) {
  auto opts = cfg.mc;
  opts.workers = workers;
  const MarketModel model = cfg.build_model();
  const TimeGrid grid = cfg.grid();
  const auto delays = cfg.delays();
  std::vector<CompareRow> rows;

  double v_merton = 0.0, v_merton_se = 0.0;
  if (with_closed_forms) {
    const auto report = closed_form_report(model, delays.front(), grid, opts.n_paths,
                                           opts.seed ^ kClosedFormSeedSalt, workers);
    v_merton = report.v_merton;
    v_merton_se = report.v_merton_se;
  }
  auto closed = [&](std::optional<double> v) { return with_closed_forms ? v : std::nullopt; };

  if (cfg.strategy == "merton") {
    const auto est = mc_expected_log_wealth(model, make_merton(model, grid), grid, opts);
    rows.push_back({cfg.model_kind, "merton", 0.0, 0.0, est, closed(v_merton), v_merton_se});
    return rows;
  }

  const CrnBatch batch = mc_crn_batch(model, delays, grid, opts);
  rows.push_back({cfg.model_kind, "merton", 0.0, 0.0, batch.merton, closed(v_merton), v_merton_se});
  for (std::size_t j = 0; j < delays.size(); ++j) {
    std::optional<double> delta;
    if (with_closed_forms) delta = closed_form_delta_v(model, delays[j], grid);
    const auto& d = delays[j];
    rows.push_back({cfg.model_kind, "ait", d.d_stock, d.d_rate, batch.informed[j],
                    delta ? std::optional<double>(v_merton + *delta) : std::nullopt, v_merton_se});
    rows.push_back({cfg.model_kind, "delta", d.d_stock, d.d_rate, batch.delta[j], delta, 0.0});
  }
  return rows;
}

}  // namespace

double CompareRow::combined_se() const { return std::hypot(mc.std_error, closed_form_se); }

std::optional<double> CompareRow::abs_diff() const {
  if (!closed_form) return std::nullopt;
  return std::abs(mc.mean - *closed_form);
}

std::optional<double> CompareRow::diff_in_se() const {
  const auto d = abs_diff();
  if (!d) return std::nullopt;
  const double se = combined_se();
  return se > 0.0 ? *d / se : (*d == 0.0 ? 0.0 : INFINITY);
}

bool CompareRow::within_tolerance() const {
  const auto d = abs_diff();
  return !d || *d <= 3.0 * combined_se() + kQuadratureTol;
}

std::vector<CompareRow> compare_rows(const ExperimentConfig& cfg, unsigned workers) {
  return mc_rows(cfg, workers, true);
}

std::vector<CompareRow> simulate_rows(const ExperimentConfig& cfg, unsigned workers) {
  return mc_rows(cfg, workers, false);
}

std::vector<std::string> row_cells(const CompareRow& r) {
  return {r.model,
          r.strategy,
          cell(r.d_stock),
          cell(r.d_rate),
          std::to_string(r.mc.n_paths),
          std::to_string(r.mc.n_steps),
          std::to_string(r.mc.seed),
          cell(r.mc.mean),
          cell(r.mc.std_error),
          cell(r.closed_form),
          cell(r.abs_diff()),
          cell(r.diff_in_se())};
}

std::string rows_csv(const std::vector<CompareRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < kCompareColumns.size(); ++i) out += (i ? "," : "") + kCompareColumns[i];
  out += '\n';
  for (const auto& r : rows) {
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  }
  return out;
}

std::string rows_table(const std::vector<CompareRow>& rows) {
  std::vector<std::vector<std::string>> grid{kCompareColumns};
  for (const auto& r : rows) grid.push_back(row_cells(r));
  std::vector<std::size_t> width(kCompareColumns.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream os;
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << line[i];
      if (i + 1 < line.size()) os << std::string(width[i] - line[i].size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

int run_compare(ExperimentConfig cfg, const CommandOptions& opts, std::ostream& out) {
  apply_overrides(cfg, opts);
  const auto rows = compare_rows(cfg, opts.workers);
  const auto path = output_path(opts, cfg.csv, "compare.csv");
  write_text(path, rows_csv(rows));
  out << rows_table(rows);
  const auto bad = std::count_if(rows.begin(), rows.end(), [](const CompareRow& r) { return !r.within_tolerance(); });
  out << (bad == 0 ? "all rows within 3 SE" : std::to_string(bad) + " row(s) outside 3 SE") << "; csv: "
      << path.string() << '\n';
  return bad == 0 ? kExitOk : kExitTolerance;
}

int run_simulate(ExperimentConfig cfg, const CommandOptions& opts, std::ostream& out) {
  apply_overrides(cfg, opts);
  const auto rows = simulate_rows(cfg, opts.workers);
  const auto path = output_path(opts, cfg.csv, "simulate.csv");
  write_text(path, rows_csv(rows));
  out << rows_table(rows) << "csv: " << path.string() << '\n';
  return kExitOk;
}

int run_temporal_value(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  require_gaussian_rate(cfg, "temporal-value");
  const TimeGrid grid = cfg.grid();
  const bool hw = cfg.model_kind == "hull_white";
  const double noise = hw ? cfg.theta : cfg.xi;
  const auto r = temporal_value(cfg.horizon, cfg.a, noise, cfg.sigma->curve, grid, cfg.tol);
  const std::string name = hw ? "theta" : "xi";
  const std::string d_star = r.finite() ? cell(r.d_star) : "inf";
  const std::string csv = "param_name,param_value,d_star_or_inf,residual\n" + name + ',' + cell(noise) + ',' +
                          d_star + ',' + cell(r.residual) + '\n';
  const auto path = output_path(opts, cfg.csv, "temporal_value.csv");
  write_text(path, csv);
  if (r.finite()) {
    out << "d* = " << d_star << "  residual = " << cell(r.residual) << "  (a = " << cell(cfg.a) << ", " << name
        << " = " << cell(noise) << ")\n";
  } else {
    out << "d* = infinite  f(T) = " << cell(r.residual) << "  (a = " << cell(cfg.a) << ", " << name << " = "
        << cell(noise) << ")\n";
  }
  out << "csv: " << path.string() << '\n';
  return kExitOk;
}

int run_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  require_gaussian_rate(cfg, "sweep");
  if (!cfg.sweep) throw ConfigError("sweep needs a [sweep] section");
  const auto& s = *cfg.sweep;
  const TimeGrid grid = cfg.grid();
  const auto values = linspace(s.min, s.max, s.count);
  std::vector<SweepTable> tables;
  if (s.sigmas.empty()) {
    const Curve& sigma = cfg.sigma->curve;
    const std::string label = sigma.is_constant() ? "sigma=" + cell(sigma.constant_value()) : "sigma(t)";
    tables.push_back(sweep(s.axis, values, s.fixed, cfg.horizon, sigma, grid, cfg.tol, opts.workers, label));
  } else {
    for (double v : s.sigmas) {
      tables.push_back(
          sweep(s.axis, values, s.fixed, cfg.horizon, Curve::constant(v), grid, cfg.tol, opts.workers, "sigma=" + cell(v)));
    }
  }
  auto csv_stem = output_path(opts, cfg.csv, "sweep.csv");
  csv_stem.replace_extension();
  const auto svg = output_path(opts, cfg.svg, "sweep.svg");
  const std::string other = s.axis == SweepAxis::a ? "xi" : "a";
  const auto files = emit_figure(tables, csv_stem, svg, "d* vs " + axis_name(s.axis) + " (" + other + " = " +
                                                            cell(s.fixed) + ", T = " + cell(cfg.horizon) + ")");
  for (std::size_t k = 0; k < tables.size(); ++k) {
    out << "# " << tables[k].label << " -> " << files.csv[k].string() << '\n' << sweep_csv(tables[k]);
  }
  out << "svg: " << files.svg.string() << '\n';
  return kExitOk;
}

}  // namespace aitlab::cli
