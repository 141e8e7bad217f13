#include "aitlab/forward_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aitlab/errors.hpp"

namespace aitlab {
namespace {

// Seed for the Merton leg when noise is deliberately not shared.
constexpr std::uint64_t kIndependentLegSalt = 0xA5A5A5A55A5A5A5Aull;

std::vector<SimulatedPath> make_scratch(const TimeGrid& grid, unsigned workers) {
  return std::vector<SimulatedPath>(resolve_workers(workers), SimulatedPath(grid));
}

void check_options(const SimulationOptions& opts) {
  if (opts.n_paths <= 0) throw InvalidArgument("n_paths must be positive");
  if (!(opts.pi_max > 0.0)) throw InvalidArgument("pi_max must be positive");
}

std::int64_t total(const std::vector<std::int64_t>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

}  // namespace

double forward_integral_left(std::span<const double> phi, std::span<const double> increments) {
  if (phi.size() != increments.size()) {
    std::ostringstream os;
    os << "forward_integral_left: " << phi.size() << " integrand values for " << increments.size() << " increments";
    throw InvalidArgument(os.str());
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!std::isfinite(phi[i])) throw NumericalError("forward_integral_left: non-finite integrand at step " + std::to_string(i));
    acc += phi[i] * increments[i];
  }
  return acc;
}

// --- PathSampler ---------------------------------------------------------------------

PathSampler::PathSampler(const MarketModel& model, const TimeGrid& grid) : model_(model), grid_(grid) {
  validate_model(model_, grid_);
  if (const auto* hw = std::get_if<HullWhiteModel>(&model_)) hw_drifts_ = hw_step_drifts(hw->rate, grid_);
}

void PathSampler::sample(std::uint64_t seed, std::uint64_t path_index, SimulatedPath& out) const {
  const bool with_w = std::holds_alternative<VasicekModel>(model_) || std::holds_alternative<HullWhiteModel>(model_);
  sample_brownian_pair(seed, path_index, with_w, out.bundle);
  if (const auto* h = std::get_if<HestonModel>(&model_)) {
    Stream vs(seed, path_index, StreamTag::variance);
    cir_exact_path(h->variance, grid_, vs, out.state);
  } else if (const auto* c = std::get_if<CirRateModel>(&model_)) {
    Stream rs(seed, path_index, StreamTag::variance);
    cir_exact_path(c->rate, grid_, rs, out.state);
  } else if (const auto* v = std::get_if<VasicekModel>(&model_)) {
    ou_exact_path(v->rate, grid_, out.bundle.w_incr, out.state);
  } else if (const auto* hw = std::get_if<HullWhiteModel>(&model_)) {
    hw_exact_path(hw->rate, grid_, hw_drifts_, out.bundle.w_incr, out.state);
  } else {
    out.state.clear();
  }
}

// --- WealthIntegrator ----------------------------------------------------------------

WealthIntegrator::WealthIntegrator(const MarketModel& model, const TimeGrid& grid) : kind_(Kind::bsm), grid_(grid) {
  validate_model(model, grid);
  const int n = grid.n_steps();
  mu_bar_.resize(n);
  rho_bar_.assign(n, 0.0);
  sigma_left_.assign(n, 0.0);
  auto step_avg = [&](const Curve& c, std::vector<double>& out) {
    for (int i = 0; i < n; ++i) out[i] = 0.5 * (c(grid.at(i)) + c(grid.at(i + 1)));
  };
  auto left = [&](const Curve& c, std::vector<double>& out) {
    for (int i = 0; i < n; ++i) out[i] = c(grid.at(i));
  };
  if (const auto* m = std::get_if<BlackScholesModel>(&model)) {
    kind_ = Kind::bsm;
    step_avg(m->mu, mu_bar_);
    step_avg(m->rho, rho_bar_);
    left(m->sigma, sigma_left_);
  } else if (const auto* h = std::get_if<HestonModel>(&model)) {
    kind_ = Kind::heston;
    step_avg(h->mu, mu_bar_);
    step_avg(h->rho, rho_bar_);
  } else {
    kind_ = Kind::rate;
    std::visit(
        [&](const auto& m) {
          if constexpr (requires { m.rate; m.sigma; }) {
            step_avg(m.mu, mu_bar_);
            left(m.sigma, sigma_left_);
          }
        },
        model);
  }
}

WealthExponent WealthIntegrator::evaluate(const SimulatedPath& path, const Strategy& strategy, double pi_max,
                                          std::int64_t* clamp_events, std::int64_t path_index) const {
  const auto& bundle = path.bundle;
  const int n = grid_.n_steps();
  const double dt = grid_.dt();
  InsiderInfo insider{InsiderKind::terminal_brownian, bundle.b_terminal};
  const InsiderInfo* insider_ptr = strategy.insider ? &insider : nullptr;
  if (kind_ != Kind::bsm && path.state.size() != grid_.n_points()) {
    throw InvalidArgument("log_wealth: model state path missing or on a different grid");
  }

  double drift = 0.0;
  double stoch = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = grid_.at(i);
    const int b_limit = grid_.index_at_or_below(t - strategy.delays.d_stock);
    const int state_limit = grid_.index_at_or_below(t - strategy.delays.d_rate);
    const PathAccess acc(bundle, path.state, i, b_limit, state_limit, insider_ptr);
    double pi = strategy.rule(acc);
    if (!std::isfinite(pi)) {
      std::ostringstream os;
      os << "non-finite portfolio fraction for strategy '" << strategy.label << "' at path " << path_index
         << ", step " << i;
      throw NumericalError(os.str());
    }
    if (std::abs(pi) > pi_max) {
      pi = std::copysign(pi_max, pi);
      if (clamp_events) ++*clamp_events;
    }
    double vol = 0.0;
    switch (kind_) {
      case Kind::bsm:
        vol = sigma_left_[i];
        drift += (rho_bar_[i] + (mu_bar_[i] - rho_bar_[i]) * pi - 0.5 * vol * vol * pi * pi) * dt;
        break;
      case Kind::heston: {
        const double v = path.state[i];
        vol = std::sqrt(v);
        drift += (rho_bar_[i] + (mu_bar_[i] - rho_bar_[i]) * pi - 0.5 * v * pi * pi) * dt;
        break;
      }
      case Kind::rate: {
        const double r = path.state[i];
        vol = sigma_left_[i];
        drift += (r + (mu_bar_[i] - r) * pi - 0.5 * vol * vol * pi * pi) * dt;
        break;
      }
    }
    stoch += vol * pi * bundle.b_incr[i];
  }
  return {drift, stoch};
}

WealthExponent log_wealth(const SimulatedPath& path, const Strategy& strategy, const MarketModel& model,
                          double pi_max) {
  return WealthIntegrator(model, path.bundle.grid).evaluate(path, strategy, pi_max);
}

// --- Estimators ------------------------------------------------------------------

McEstimate mc_expected_log_wealth(const MarketModel& model, const Strategy& strategy, const TimeGrid& grid,
                                  const SimulationOptions& opts) {
  check_options(opts);
  const PathSampler sampler(model, grid);
  const WealthIntegrator integrator(model, grid);
  auto scratch = make_scratch(grid, opts.workers);
  std::vector<std::int64_t> clamps(scratch.size(), 0);
  std::vector<double> values(opts.n_paths);
  parallel_paths(opts.n_paths, opts.workers, [&](std::int64_t p, unsigned w) {
    sampler.sample(opts.seed, static_cast<std::uint64_t>(p), scratch[w]);
    values[p] = integrator.evaluate(scratch[w], strategy, opts.pi_max, &clamps[w], p).log_wealth();
  });
  auto est = summarize(values, opts.seed, grid.n_steps());
  est.clamp_events = total(clamps);
  return est;
}

McEstimate mc_delta_v(const MarketModel& model, const DelaySpec& delays, const TimeGrid& grid,
                      const SimulationOptions& opts, NoiseSharing sharing) {
  if (sharing == NoiseSharing::common) return mc_delta_v_batch(model, std::span(&delays, 1), grid, opts).front();

  check_options(opts);
  const PathSampler sampler(model, grid);
  const WealthIntegrator integrator(model, grid);
  const Strategy merton = make_merton(model, grid);
  const Strategy ait = make_ait(model, grid, delays);
  auto scratch = make_scratch(grid, opts.workers);
  std::vector<std::int64_t> clamps(scratch.size(), 0);
  std::vector<double> values(opts.n_paths);
  const std::uint64_t other_seed = opts.seed ^ kIndependentLegSalt;
  parallel_paths(opts.n_paths, opts.workers, [&](std::int64_t p, unsigned w) {
    auto& path = scratch[w];
    sampler.sample(opts.seed, static_cast<std::uint64_t>(p), path);
    const double informed = integrator.evaluate(path, ait, opts.pi_max, &clamps[w], p).log_wealth();
    sampler.sample(other_seed, static_cast<std::uint64_t>(p), path);
    const double traditional = integrator.evaluate(path, merton, opts.pi_max, &clamps[w], p).log_wealth();
    values[p] = informed - traditional;
  });
  auto est = summarize(values, opts.seed, grid.n_steps());
  est.clamp_events = total(clamps);
  return est;
}

CrnBatch mc_crn_batch(const MarketModel& model, std::span<const DelaySpec> delays, const TimeGrid& grid,
                      const SimulationOptions& opts) {
  check_options(opts);
  if (delays.empty()) throw InvalidArgument("mc_crn_batch: no delay settings");
  const PathSampler sampler(model, grid);
  const WealthIntegrator integrator(model, grid);
  const Strategy merton = make_merton(model, grid);
  std::vector<Strategy> informed;
  informed.reserve(delays.size());
  for (const auto& d : delays) informed.push_back(make_ait(model, grid, d));

  const std::size_t k = delays.size();
  auto scratch = make_scratch(grid, opts.workers);
  std::vector<std::vector<std::int64_t>> clamps(k, std::vector<std::int64_t>(scratch.size(), 0));
  std::vector<std::int64_t> merton_clamps(scratch.size(), 0);
  std::vector<double> merton_values(opts.n_paths);
  std::vector<std::vector<double>> values(k, std::vector<double>(opts.n_paths));
  parallel_paths(opts.n_paths, opts.workers, [&](std::int64_t p, unsigned w) {
    auto& path = scratch[w];
    sampler.sample(opts.seed, static_cast<std::uint64_t>(p), path);
    merton_values[p] = integrator.evaluate(path, merton, opts.pi_max, &merton_clamps[w], p).log_wealth();
    for (std::size_t j = 0; j < k; ++j) {
      values[j][p] = integrator.evaluate(path, informed[j], opts.pi_max, &clamps[j][w], p).log_wealth();
    }
  });
  CrnBatch out;
  out.merton = summarize(merton_values, opts.seed, grid.n_steps());
  out.merton.clamp_events = total(merton_clamps);
  for (std::size_t j = 0; j < k; ++j) {
    auto est = summarize(values[j], opts.seed, grid.n_steps());
    est.clamp_events = total(clamps[j]);
    out.informed.push_back(est);
    for (std::int64_t p = 0; p < opts.n_paths; ++p) values[j][p] -= merton_values[p];
    est = summarize(values[j], opts.seed, grid.n_steps());
    est.clamp_events = total(clamps[j]) + out.merton.clamp_events;
    out.delta.push_back(est);
  }
  return out;
}

std::vector<McEstimate> mc_delta_v_batch(const MarketModel& model, std::span<const DelaySpec> delays,
                                         const TimeGrid& grid, const SimulationOptions& opts) {
  return mc_crn_batch(model, delays, grid, opts).delta;
}

McEstimate mc_forward_integral(const TimeGrid& grid, double b_delay,
                               const std::function<double(const PathAccess&)>& phi,
                               const SimulationOptions& opts) {
  check_options(opts);
  if (b_delay < 0.0) throw InvalidArgument("mc_forward_integral: delay must be >= 0");
  auto scratch = make_scratch(grid, opts.workers);
  std::vector<std::vector<double>> integrand(scratch.size(), std::vector<double>(grid.n_steps()));
  std::vector<double> values(opts.n_paths);
  parallel_paths(opts.n_paths, opts.workers, [&](std::int64_t p, unsigned w) {
    auto& bundle = scratch[w].bundle;
    sample_brownian_pair(opts.seed, static_cast<std::uint64_t>(p), false, bundle);
    const InsiderInfo insider{InsiderKind::terminal_brownian, bundle.b_terminal};
    auto& f = integrand[w];
    for (int i = 0; i < grid.n_steps(); ++i) {
      const PathAccess acc(bundle, {}, i, grid.index_at_or_below(grid.at(i) - b_delay), i, &insider);
      f[i] = phi(acc);
    }
    values[p] = forward_integral_left(f, bundle.b_incr);
  });
  return summarize(values, opts.seed, grid.n_steps());
}

}  // namespace aitlab
