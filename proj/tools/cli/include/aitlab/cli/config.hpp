#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aitlab/errors.hpp"
#include "aitlab/forward_mc.hpp"
#include "aitlab/grids_curves.hpp"
#include "aitlab/stochastic_models.hpp"
#include "aitlab/strategies.hpp"
#include "aitlab/temporal_value.hpp"

namespace aitlab::cli {

/// Config problem with a file:line prefix.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct CurveSpec {
  Curve curve;
  std::optional<double> floor;  // sigma only
  bool operator==(const CurveSpec&) const = default;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::xi;
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  double fixed = 1.0;           // the non-swept one of (a, xi)
  std::vector<double> sigmas;  // one series per value; empty = the sigma curve
  bool operator==(const SweepSpec&) const = default;
};

/// Everything one experiment needs. Parameters are kept as read so the
/// canonical form can be written back; build_model() assembles the model.
struct ExperimentConfig {
  double horizon = 1.0;
  int n_steps = 1000;
  SimulationOptions mc;

  std::string model_kind = "bsm";
  // [model] numeric parameters, only those used by model_kind are meaningful.
  double kappa = 0.0, theta = 0.0, eta = 0.0, v0 = 0.0;  // heston
  double a = 0.0, b = 0.0, xi = 0.0, r0 = 0.0;           // vasicek / hull_white / cir

  std::optional<CurveSpec> mu, rho, sigma, hw_kappa;

  std::string strategy = "ait";
  std::vector<double> d_stock{0.5};
  double d_rate = 0.0;
  std::string insider = "terminal_brownian";

  double tol = kTemporalValueTol;
  std::optional<SweepSpec> sweep;

  std::string csv;
  std::string svg;

  bool operator==(const ExperimentConfig&) const = default;

  TimeGrid grid() const { return TimeGrid(horizon, n_steps); }
  MarketModel build_model() const;
  std::vector<DelaySpec> delays() const;
};

/// Parses the sectioned key = value format. Unknown sections or keys,
/// malformed numbers, missing required parameters and every upstream
/// validation rule are reported as ConfigError (or InadmissibleModel) with
/// `origin:line` in the message.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical form: fixed section/key order, %.17g numbers.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace aitlab::cli
