#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aitlab/estimate.hpp"
#include "aitlab/grids_curves.hpp"
#include "aitlab/stochastic_models.hpp"
#include "aitlab/strategies.hpp"

namespace aitlab {

/// d/(2T) + ln(T/d)/2. Requires 0 < d <= T.
double delta_v_single_delay(double horizon, double d);

/// int (sigma^2 pibar^2 / 2 + rho) dt with pibar = (mu - rho)/sigma^2, trapezoid on `grid`.
double v_merton_bsm(const Curve& mu, const Curve& rho, const Curve& sigma, const TimeGrid& grid,
                    double sigma_floor = 1e-6);

struct ValueWithError {
  double value;
  double std_error;  // Monte Carlo part only
};

/// int ((mu - rho)^2 E[1/V(t)] / 2 + rho) dt. E[1/V] has no elementary form, so
/// the t-integral is taken path by path over exact CIR paths and averaged.
ValueWithError v_merton_heston(const Curve& mu, const Curve& rho, const CIRParams& variance, const TimeGrid& grid,
                               std::int64_t n_paths, std::uint64_t seed, unsigned workers = 0);

/// int (E[(mu - R)^2] / (2 sigma^2) + E[R]) dt from the exact moments of R.
double v_merton_vasicek(const Curve& mu, const Curve& sigma, const OUParams& ou, const TimeGrid& grid,
                        double sigma_floor = 1e-6);
double v_merton_hw(const Curve& mu, const Curve& sigma, const HWParams& hw, const TimeGrid& grid,
                   double sigma_floor = 1e-6);
double v_merton_cir_rate(const Curve& mu, const Curve& sigma, const CIRParams& cir, const TimeGrid& grid,
                         double sigma_floor = 1e-6);

/// int_0^T (1 - e^{-2a (t ^ d)}) / sigma^2(t) dt, split at the kink t = d.
double delay_variance_integral(double horizon, double d, double a, const Curve& sigma, int panels);

/// Insider gain minus the cost of seeing R with delay d_rate:
/// d_s/(2T) + ln(T/d_s)/2 - xi^2/(4a) int (1 - e^{-2a (t ^ d_r)}) / sigma^2 dt.
double two_delay_difference(double horizon, double d_stock, double d_rate, const OUParams& ou, const Curve& sigma,
                            const TimeGrid& grid);
/// Same with xi replaced by the Hull-White rate volatility theta.
double two_delay_difference_hw(double horizon, const DelaySpec& delays, const HWParams& hw, const Curve& sigma,
                               const TimeGrid& grid);

struct ClosedFormReport {
  double v_merton = 0.0;
  double v_merton_se = 0.0;       // nonzero only for Heston
  std::optional<double> delta_v;  // absent for CIR short rate with d_rate > 0
  std::optional<double> v_ait;
  std::string v_merton_source;
  std::string delta_v_source;
};

/// Closed-form insider advantage for (model, delays), if one exists: the
/// single-delay gain when d_rate = 0, the two-delay difference for Gaussian
/// rates, nothing for the CIR short rate with d_rate > 0.
std::optional<double> closed_form_delta_v(const MarketModel& model, const DelaySpec& delays, const TimeGrid& grid,
                                          std::string* source = nullptr);

/// Every available closed-form number for (model, delays). n_paths / seed only
/// matter for Heston.
ClosedFormReport closed_form_report(const MarketModel& model, const DelaySpec& delays, const TimeGrid& grid,
                                    std::int64_t n_paths, std::uint64_t seed, unsigned workers = 0);

}  // namespace aitlab
