#include "aitlab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aitlab/errors.hpp"

namespace aitlab {
namespace {

constexpr int kMinPanels = 4096;

void require_floor(const Curve& sigma, const TimeGrid& grid, double floor) {
  if (!(floor > 0.0)) throw InvalidArgument("volatility floor must be > 0");
  if (!volatility_floor_check(sigma, grid, floor)) throw InvalidArgument("volatility curve falls below its floor");
}

template <class MomentsAt>
double rate_merton_value(const Curve& mu, const Curve& sigma, const TimeGrid& grid, MomentsAt&& moments_at) {
  return integrate(
      [&](double t) {
        const Moments m = moments_at(t);
        const double u = mu(t);
        const double s = sigma(t);
        const double excess_sq = u * u - 2.0 * u * m.mean + m.second_moment;
        return excess_sq / (2.0 * s * s) + m.mean;
      },
      grid);
}

}  // namespace

double delta_v_single_delay(double horizon, double d) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be > 0");
  if (!(d > 0.0) || d > horizon) {
    std::ostringstream os;
    os << "delay d = " << d << " outside (0, T] with T = " << horizon;
    throw InvalidArgument(os.str());
  }
  return d / (2.0 * horizon) + 0.5 * std::log(horizon / d);
}

double v_merton_bsm(const Curve& mu, const Curve& rho, const Curve& sigma, const TimeGrid& grid, double sigma_floor) {
  require_floor(sigma, grid, sigma_floor);
  return integrate(
      [&](double t) {
        const double s = sigma(t);
        const double ex = mu(t) - rho(t);
        return ex * ex / (2.0 * s * s) + rho(t);
      },
      grid);
}

ValueWithError v_merton_heston(const Curve& mu, const Curve& rho, const CIRParams& variance, const TimeGrid& grid,
                               std::int64_t n_paths, std::uint64_t seed, unsigned workers) {
  validate_model(HestonModel{mu, rho, variance}, grid);
  if (n_paths <= 0) throw InvalidArgument("v_merton_heston: n_paths must be positive");
  const auto np = grid.n_points();
  std::vector<double> half_ex_sq(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double t = grid.at(static_cast<int>(i));
    const double ex = mu(t) - rho(t);
    half_ex_sq[i] = 0.5 * ex * ex;
  }
  // By linearity, the mean of per-path trapezoids equals the trapezoid of the
  // pointwise means of 1/V, and the per-path values give the SE directly.
  std::vector<double> per_path(n_paths);
  std::vector<std::vector<double>> z(resolve_workers(workers)), f(z.size(), std::vector<double>(np));
  parallel_paths(n_paths, workers, [&](std::int64_t p, unsigned w) {
    Stream s(seed, static_cast<std::uint64_t>(p), StreamTag::variance);
    cir_exact_path(variance, grid, s, z[w]);
    for (std::size_t i = 0; i < np; ++i) f[w][i] = half_ex_sq[i] / z[w][i];
    per_path[p] = integrate(std::span<const double>(f[w]), grid);
  });
  const McEstimate est = summarize(per_path, seed, grid.n_steps());
  return {est.mean + integrate(rho, grid), est.std_error};
}

double v_merton_vasicek(const Curve& mu, const Curve& sigma, const OUParams& ou, const TimeGrid& grid,
                        double sigma_floor) {
  ou.validate();
  require_floor(sigma, grid, sigma_floor);
  return rate_merton_value(mu, sigma, grid, [&](double t) { return ou_moments(ou, t); });
}

double v_merton_hw(const Curve& mu, const Curve& sigma, const HWParams& hw, const TimeGrid& grid, double sigma_floor) {
  hw.validate(grid);
  require_floor(sigma, grid, sigma_floor);
  return rate_merton_value(mu, sigma, grid, [&](double t) { return hw_moments(hw, t); });
}

double v_merton_cir_rate(const Curve& mu, const Curve& sigma, const CIRParams& cir, const TimeGrid& grid,
                         double sigma_floor) {
  cir.validate();
  require_floor(sigma, grid, sigma_floor);
  return rate_merton_value(mu, sigma, grid, [&](double t) { return cir_moments(cir, t); });
}

double delay_variance_integral(double horizon, double d, double a, const Curve& sigma, int panels) {
  if (!(a > 0.0)) throw InvalidArgument("mean reversion a must be > 0");
  if (d < 0.0 || d > horizon) throw InvalidArgument("rate delay outside [0, T]");
  if (d == 0.0) return 0.0;
  auto inv_var = [&](double t) {
    const double s = sigma(t);
    return 1.0 / (s * s);
  };
  const double before = trapezoid([&](double t) { return -std::expm1(-2.0 * a * t) * inv_var(t); }, 0.0, d, panels);
  const double plateau = -std::expm1(-2.0 * a * d);
  const double after = d < horizon ? plateau * trapezoid(inv_var, d, horizon, panels) : 0.0;
  return before + after;
}

double two_delay_difference(double horizon, double d_stock, double d_rate, const OUParams& ou, const Curve& sigma,
                            const TimeGrid& grid) {
  ou.validate();
  DelaySpec{d_stock, d_rate}.validate(horizon);
  const double gain = delta_v_single_delay(horizon, d_stock);
  if (ou.xi == 0.0) return gain;
  const int panels = std::max(kMinPanels, grid.n_steps());
  const double cost = ou.xi * ou.xi / (4.0 * ou.a) * delay_variance_integral(horizon, d_rate, ou.a, sigma, panels);
  return gain - cost;
}

double two_delay_difference_hw(double horizon, const DelaySpec& delays, const HWParams& hw, const Curve& sigma,
                               const TimeGrid& grid) {
  return two_delay_difference(horizon, delays.d_stock, delays.d_rate, OUParams{hw.a, 0.0, hw.theta, hw.r0}, sigma,
                              grid);
}

std::optional<double> closed_form_delta_v(const MarketModel& model, const DelaySpec& delays, const TimeGrid& grid,
                                          std::string* source) {
  delays.validate(grid.horizon());
  if (!has_short_rate(model) && delays.d_rate > 0.0) {
    throw InvalidArgument("d_rate > 0 needs a short-rate model, got " + model_kind(model));
  }
  const double T = grid.horizon();
  auto note = [&](const char* s) {
    if (source) *source = s;
  };
  if (delays.d_rate == 0.0) {
    note("single-delay insider gain");
    return delta_v_single_delay(T, delays.d_stock);
  }
  if (const auto* v = std::get_if<VasicekModel>(&model)) {
    note("two-delay difference, Gaussian rate");
    return two_delay_difference(T, delays.d_stock, delays.d_rate, v->rate, v->sigma, grid);
  }
  if (const auto* w = std::get_if<HullWhiteModel>(&model)) {
    note("two-delay difference, Gaussian rate");
    return two_delay_difference_hw(T, delays, w->rate, w->sigma, grid);
  }
  note("none (state-dependent conditional variance)");
  return std::nullopt;
}

ClosedFormReport closed_form_report(const MarketModel& model, const DelaySpec& delays, const TimeGrid& grid,
                                    std::int64_t n_paths, std::uint64_t seed, unsigned workers) {
  validate_model(model, grid);
  ClosedFormReport r;
  r.delta_v = closed_form_delta_v(model, delays, grid, &r.delta_v_source);
  if (const auto* m = std::get_if<BlackScholesModel>(&model)) {
    r.v_merton = v_merton_bsm(m->mu, m->rho, m->sigma, grid, m->sigma_floor);
    r.v_merton_source = "merton value, deterministic coefficients";
  } else if (const auto* h = std::get_if<HestonModel>(&model)) {
    const auto v = v_merton_heston(h->mu, h->rho, h->variance, grid, n_paths, seed, workers);
    r.v_merton = v.value;
    r.v_merton_se = v.std_error;
    r.v_merton_source = "merton value, stochastic variance (E[1/V] by exact CIR paths)";
  } else if (const auto* v = std::get_if<VasicekModel>(&model)) {
    r.v_merton = v_merton_vasicek(v->mu, v->sigma, v->rate, grid, v->sigma_floor);
    r.v_merton_source = "merton value, Vasicek rate moments";
  } else if (const auto* w = std::get_if<HullWhiteModel>(&model)) {
    r.v_merton = v_merton_hw(w->mu, w->sigma, w->rate, grid, w->sigma_floor);
    r.v_merton_source = "merton value, Hull-White rate moments";
  } else if (const auto* c = std::get_if<CirRateModel>(&model)) {
    r.v_merton = v_merton_cir_rate(c->mu, c->sigma, c->rate, grid, c->sigma_floor);
    r.v_merton_source = "merton value, CIR rate moments";
  }
  if (r.delta_v) r.v_ait = r.v_merton + *r.delta_v;
  return r;
}

}  // namespace aitlab
