#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aitlab/estimate.hpp"
#include "aitlab/stochastic_models.hpp"
#include "aitlab/strategies.hpp"

namespace aitlab {

struct SimulationOptions {
  std::int64_t n_paths = 10'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency
  double pi_max = 1e6;   // |pi| clamp, every activation is counted

  bool operator==(const SimulationOptions&) const = default;
};

/// Left-point Riemann sum sum_i phi_i (B(t_{i+1}) - B(t_i)).
double forward_integral_left(std::span<const double> phi, std::span<const double> increments);

/// Log-wealth split into its dt part and its d^-B part.
struct WealthExponent {
  double drift_integral = 0.0;
  double stochastic_integral = 0.0;
  double log_wealth() const noexcept { return drift_integral + stochastic_integral; }
};

/// One simulated market path: the Brownian pair plus the model state
/// (V for Heston, R for short-rate models, empty for Black-Scholes).
struct SimulatedPath {
  explicit SimulatedPath(const TimeGrid& grid) : bundle(grid) {}
  PathBundle bundle;
  std::vector<double> state;
};

/// Draws SimulatedPaths for one (model, grid). Holds the per-grid precomputation
/// (Hull-White step drifts) so sampling a path is allocation-free after warm-up.
class PathSampler {
 public:
  PathSampler(const MarketModel& model, const TimeGrid& grid);

  void sample(std::uint64_t seed, std::uint64_t path_index, SimulatedPath& out) const;
  const TimeGrid& grid() const noexcept { return grid_; }

 private:
  MarketModel model_;
  TimeGrid grid_;
  std::vector<double> hw_drifts_;
};

/// Per-grid coefficients of the wealth exponent for one model. Deterministic
/// curves enter through their trapezoid average over each step; the model state
/// and the volatility multiplying pi in both the dt and the d^-B terms are taken
/// at the left point.
class WealthIntegrator {
 public:
  WealthIntegrator(const MarketModel& model, const TimeGrid& grid);

  /// Exponent of X^pi(T) for the strategy on this path. pi_i outside
  /// [-pi_max, pi_max] is clamped and counted in *clamp_events. Non-finite pi
  /// throws NumericalError naming (path, step).
  WealthExponent evaluate(const SimulatedPath& path, const Strategy& strategy, double pi_max,
                          std::int64_t* clamp_events = nullptr, std::int64_t path_index = -1) const;

 private:
  enum class Kind { bsm, heston, rate } kind_;
  TimeGrid grid_;
  std::vector<double> mu_bar_, rho_bar_, sigma_left_;
};

WealthExponent log_wealth(const SimulatedPath& path, const Strategy& strategy, const MarketModel& model,
                          double pi_max = 1e6);

/// E[log X^pi(T)] over independent paths.
McEstimate mc_expected_log_wealth(const MarketModel& model, const Strategy& strategy, const TimeGrid& grid,
                                  const SimulationOptions& opts);

enum class NoiseSharing { common, independent };

/// E[log X^{ait}(T) - log X^{merton}(T)]. With NoiseSharing::common both strategies
/// run on the same path (common random numbers); `independent` drives the
/// Merton leg from a disjoint seed and exists for variance comparisons.
McEstimate mc_delta_v(const MarketModel& model, const DelaySpec& delays, const TimeGrid& grid,
                      const SimulationOptions& opts, NoiseSharing sharing = NoiseSharing::common);

/// Merton and informed log-wealth plus their CRN differences, all on one
/// shared set of paths.
struct CrnBatch {
  McEstimate merton;
  std::vector<McEstimate> informed;  // one per delay setting
  std::vector<McEstimate> delta;     // informed - merton, path by path
};
CrnBatch mc_crn_batch(const MarketModel& model, std::span<const DelaySpec> delays, const TimeGrid& grid,
                      const SimulationOptions& opts);

/// mc_delta_v for several delay settings on one shared set of paths.
std::vector<McEstimate> mc_delta_v_batch(const MarketModel& model, std::span<const DelaySpec> delays,
                                         const TimeGrid& grid, const SimulationOptions& opts);

/// E[int phi d^-B] for the integrand built per step from the path view.
/// The view exposes B up to (t - b_delay)^+ and G = B(T).
McEstimate mc_forward_integral(const TimeGrid& grid, double b_delay, const std::function<double(const PathAccess&)>& phi,
                               const SimulationOptions& opts);

}  // namespace aitlab
