#pragma once

#include <functional>
#include <span>
#include <string>

#include "aitlab/grids_curves.hpp"
#include "aitlab/stochastic_models.hpp"

namespace aitlab {

/// Delays on the stock filtration F (d_stock) and the rate filtration H (d_rate).
struct DelaySpec {
  double d_stock = 1.0;
  double d_rate = 0.0;

  /// 0 < d_stock <= T, 0 <= d_rate <= T.
  void validate(double horizon) const;
  bool operator==(const DelaySpec&) const = default;
};

enum class InsiderKind { terminal_brownian };

/// The insider datum G. Only G = B(T) is implemented.
struct InsiderInfo {
  InsiderKind kind = InsiderKind::terminal_brownian;
  double g = 0.0;
};

/// Read-only view of one path at step i that only exposes what a trader with the
/// given delays may observe: B up to index b_limit, the model state (V or R) up to
/// state_limit, and G only for insiders. Out-of-range reads throw
/// MeasurabilityViolation.
class PathAccess {
 public:
  PathAccess(const PathBundle& path, std::span<const double> state, int step, int b_limit, int state_limit,
             const InsiderInfo* insider) noexcept
      : path_(&path), state_(state), step_(step), b_limit_(b_limit), state_limit_(state_limit), insider_(insider) {}

  int step() const noexcept { return step_; }
  double t() const noexcept { return path_->grid.at(step_); }
  double horizon() const noexcept { return path_->grid.horizon(); }

  int b_limit() const noexcept { return b_limit_; }
  double b_limit_time() const noexcept { return path_->grid.at(b_limit_); }
  double b(int j) const;
  double b_latest() const { return b(b_limit_); }

  int state_limit() const noexcept { return state_limit_; }
  double state_limit_time() const noexcept { return path_->grid.at(state_limit_); }
  double state(int j) const;
  double state_latest() const { return state(state_limit_); }

  bool is_insider() const noexcept { return insider_ != nullptr; }
  double g() const;

 private:
  const PathBundle* path_;
  std::span<const double> state_;
  int step_;
  int b_limit_;
  int state_limit_;
  const InsiderInfo* insider_;
};

/// alpha_d(t, g) for one path, as a pluggable hook for other insider data.
using DivergenceHook = std::function<double(const PathAccess&)>;

/// G = B(T): (g - B(s)) / (T - s) with s the snapped observation time.
DivergenceHook terminal_brownian_divergence();

/// A portfolio rule pi(t_i). Evaluated at left grid points and held over
/// [t_i, t_{i+1}).
struct Strategy {
  std::string label;  // "merton" or "ait"
  std::string model;  // model_kind()
  DelaySpec delays;   // d_stock = 0 for the traditional trader
  bool insider = false;
  std::function<double(const PathAccess&)> rule;
};

// --- Pointwise formulas ------------------------------------------------------------

/// (g - B((t-d)^+)) / (T - (t-d)^+). Throws for d <= 0 or t outside [0, T].
double alpha_d(double t, double g, double b_delayed, double T, double d);

double merton_bsm(const Curve& mu, const Curve& rho, const Curve& sigma, double t, double sigma_floor = 1e-6);
double ait_bsm(double t, double g, double b_delayed, const Curve& mu, const Curve& rho, const Curve& sigma, double T,
               double d, double sigma_floor = 1e-6);

/// (mu - rho) / v_t; throws NumericalError for v_t <= 0.
double merton_heston(const Curve& mu, const Curve& rho, double v_t, double t);
/// Merton plus alpha / sqrt(v_t).
double ait_heston(const Curve& mu, const Curve& rho, double v_t, double t, double alpha);

double merton_vasicek(const Curve& mu, const Curve& sigma, double r_t, double t, double sigma_floor = 1e-6);

/// Conditional rate mean E[R(t) | R(s) = r_s] used by the delayed-rate strategy.
using RateConditionalMean = std::function<double(double s, double t, double r_s)>;
RateConditionalMean conditional_mean_for(const OUParams& p);
RateConditionalMean conditional_mean_for(const HWParams& p);
RateConditionalMean conditional_mean_for(const CIRParams& p);

/// (mu(t) - E[R(t) | R((t - d_rate)^+)]) / sigma^2(t) + alpha_{d_stock}(t, g) / sigma(t).
double ait_two_delay(double t, double g, double b_delayed, double r_delayed, const RateConditionalMean& cond_mean,
                     const Curve& mu, const Curve& sigma, double T, const DelaySpec& delays,
                     double sigma_floor = 1e-6);

// --- Strategy factories -----------------------------------------------------------

/// Traditional trader: F- and H-adapted, no insider datum.
Strategy make_merton(const MarketModel& model, const TimeGrid& grid);

/// Asymmetrically informed trader with the given delays. d_rate > 0 requires a
/// short-rate model. The divergence hook defaults to the G = B(T) closed form.
Strategy make_ait(const MarketModel& model, const TimeGrid& grid, const DelaySpec& delays,
                  DivergenceHook divergence = {});

}  // namespace aitlab
