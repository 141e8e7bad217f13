#include "aitlab/strategies.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "aitlab/errors.hpp"

namespace aitlab {
namespace {

double checked_sigma(const Curve& sigma, double t, double floor) {
  const double s = sigma(t);
  if (!(s >= floor)) {
    std::ostringstream os;
    os << "volatility " << s << " at t = " << t << " is below the floor " << floor;
    throw InvalidArgument(os.str());
  }
  return s;
}

std::string read_error(const char* what, int j, int limit, int step) {
  std::ostringstream os;
  os << "strategy read " << what << " at index " << j << " but may only observe indices <= " << limit
     << " at step " << step;
  return os.str();
}

}  // namespace

void DelaySpec::validate(double horizon) const {
  if (!(d_stock > 0.0 && d_stock <= horizon)) {
    throw InvalidArgument("stock delay must satisfy 0 < d_stock <= T");
  }
  if (!(d_rate >= 0.0 && d_rate <= horizon)) {
    throw InvalidArgument("rate delay must satisfy 0 <= d_rate <= T");
  }
}

double PathAccess::b(int j) const {
  if (j < 0 || j > b_limit_) throw MeasurabilityViolation(read_error("B", j, b_limit_, step_));
  return path_->b_values[j];
}

double PathAccess::state(int j) const {
  if (j < 0 || j > state_limit_) throw MeasurabilityViolation(read_error("model state", j, state_limit_, step_));
  if (static_cast<std::size_t>(j) >= state_.size()) throw InvalidArgument("model has no state path");
  return state_[j];
}

double PathAccess::g() const {
  if (insider_ == nullptr) throw MeasurabilityViolation("traditional trader cannot read the insider datum");
  return insider_->g;
}

DivergenceHook terminal_brownian_divergence() {
  return [](const PathAccess& acc) {
    const double s = acc.b_limit_time();
    return (acc.g() - acc.b_latest()) / (acc.horizon() - s);
  };
}

double alpha_d(double t, double g, double b_delayed, double T, double d) {
  if (!(d > 0.0)) throw InvalidArgument("alpha_d: delay must be > 0");
  if (!(t >= 0.0 && t <= T)) throw InvalidArgument("alpha_d: t outside [0, T]");
  const double s = std::max(t - d, 0.0);
  return (g - b_delayed) / (T - s);
}

double merton_bsm(const Curve& mu, const Curve& rho, const Curve& sigma, double t, double sigma_floor) {
  const double s = checked_sigma(sigma, t, sigma_floor);
  return (mu(t) - rho(t)) / (s * s);
}

double ait_bsm(double t, double g, double b_delayed, const Curve& mu, const Curve& rho, const Curve& sigma, double T,
               double d, double sigma_floor) {
  return merton_bsm(mu, rho, sigma, t, sigma_floor) + alpha_d(t, g, b_delayed, T, d) / sigma(t);
}

double merton_heston(const Curve& mu, const Curve& rho, double v_t, double t) {
  if (!(v_t > 0.0)) {
    std::ostringstream os;
    os << "merton_heston: non-positive variance " << v_t << " at t = " << t;
    throw NumericalError(os.str());
  }
  return (mu(t) - rho(t)) / v_t;
}

double ait_heston(const Curve& mu, const Curve& rho, double v_t, double t, double alpha) {
  return merton_heston(mu, rho, v_t, t) + alpha / std::sqrt(v_t);
}

double merton_vasicek(const Curve& mu, const Curve& sigma, double r_t, double t, double sigma_floor) {
  const double s = checked_sigma(sigma, t, sigma_floor);
  return (mu(t) - r_t) / (s * s);
}

RateConditionalMean conditional_mean_for(const OUParams& p) {
  return [p](double s, double t, double r_s) { return ou_conditional_law(p, s, t, r_s).mean; };
}

RateConditionalMean conditional_mean_for(const HWParams& p) {
  return [p](double s, double t, double r_s) { return hw_conditional_mean(p, s, t, r_s); };
}

RateConditionalMean conditional_mean_for(const CIRParams& p) {
  return [p](double s, double t, double r_s) { return cir_conditional_mean(p, s, t, r_s); };
}

double ait_two_delay(double t, double g, double b_delayed, double r_delayed, const RateConditionalMean& cond_mean,
                     const Curve& mu, const Curve& sigma, double T, const DelaySpec& delays, double sigma_floor) {
  delays.validate(T);
  const double s_rate = std::max(t - delays.d_rate, 0.0);
  const double m = delays.d_rate == 0.0 ? r_delayed : cond_mean(s_rate, t, r_delayed);
  const double sig = checked_sigma(sigma, t, sigma_floor);
  return (mu(t) - m) / (sig * sig) + alpha_d(t, g, b_delayed, T, delays.d_stock) / sig;
}

// --- Factories --------------------------------------------------------------------

namespace {

struct RateStrategyData {
  std::vector<double> mu;
  std::vector<double> sigma;
  // Delayed-rate conditional mean at step i: decay[i] * R(state_limit) + offset[i].
  std::vector<double> decay;
  std::vector<double> offset;
};

std::vector<double> sample_sigma(const Curve& sigma, double floor, const TimeGrid& grid) {
  std::vector<double> out(grid.n_points());
  for (int i = 0; i <= grid.n_steps(); ++i) out[i] = checked_sigma(sigma, grid.at(i), floor);
  return out;
}

// Fills decay/offset so that E[R(t_i) | R(t_j)] = decay[i] * R(t_j) + offset[i],
// with j the snapped delayed index.
void fill_conditional_mean(const MarketModel& model, const TimeGrid& grid, double d_rate, RateStrategyData& data) {
  const int np = static_cast<int>(grid.n_points());
  data.decay.assign(np, 1.0);
  data.offset.assign(np, 0.0);
  if (d_rate == 0.0) return;
  std::vector<double> hw_drifts;
  if (const auto* hw = std::get_if<HullWhiteModel>(&model)) hw_drifts = hw_step_drifts(hw->rate, grid);
  for (int i = 0; i < np; ++i) {
    const int j = grid.index_at_or_below(grid.at(i) - d_rate);
    const double h = grid.at(i) - grid.at(j);
    if (const auto* vk = std::get_if<VasicekModel>(&model)) {
      const double e = std::exp(-vk->rate.a * h);
      data.decay[i] = e;
      data.offset[i] = vk->rate.b * (1.0 - e);
    } else if (const auto* cir = std::get_if<CirRateModel>(&model)) {
      const double e = std::exp(-cir->rate.kappa * h);
      data.decay[i] = e;
      data.offset[i] = cir->rate.theta * (1.0 - e);
    } else if (const auto* hw = std::get_if<HullWhiteModel>(&model)) {
      // Compose exact one-step means from t_j to t_i.
      const double step_decay = std::exp(-hw->rate.a * grid.dt());
      double decay = 1.0, offset = 0.0;
      for (int k = j; k < i; ++k) {
        decay *= step_decay;
        offset = offset * step_decay + hw_drifts[k];
      }
      data.decay[i] = decay;
      data.offset[i] = offset;
    }
  }
}

struct RateView {
  const Curve* mu;
  const Curve* sigma;
  double floor;
};

RateView rate_view(const MarketModel& model) {
  if (const auto* m = std::get_if<VasicekModel>(&model)) return {&m->mu, &m->sigma, m->sigma_floor};
  if (const auto* m = std::get_if<HullWhiteModel>(&model)) return {&m->mu, &m->sigma, m->sigma_floor};
  const auto& m = std::get<CirRateModel>(model);
  return {&m.mu, &m.sigma, m.sigma_floor};
}

}  // namespace

Strategy make_merton(const MarketModel& model, const TimeGrid& grid) {
  validate_model(model, grid);
  Strategy s;
  s.label = "merton";
  s.model = model_kind(model);
  s.delays = DelaySpec{0.0, 0.0};
  s.insider = false;

  if (const auto* m = std::get_if<BlackScholesModel>(&model)) {
    std::vector<double> pi(grid.n_points());
    for (int i = 0; i <= grid.n_steps(); ++i) pi[i] = merton_bsm(m->mu, m->rho, m->sigma, grid.at(i), m->sigma_floor);
    s.rule = [pi = std::move(pi)](const PathAccess& acc) { return pi[acc.step()]; };
  } else if (const auto* h = std::get_if<HestonModel>(&model)) {
    auto mu = h->mu, rho = h->rho;
    s.rule = [mu, rho](const PathAccess& acc) { return merton_heston(mu, rho, acc.state_latest(), acc.t()); };
  } else {
    const auto v = rate_view(model);
    auto data = std::make_shared<RateStrategyData>();
    data->mu = v.mu->sample(grid);
    data->sigma = sample_sigma(*v.sigma, v.floor, grid);
    s.rule = [data](const PathAccess& acc) {
      const int i = acc.step();
      const double sig = data->sigma[i];
      return (data->mu[i] - acc.state_latest()) / (sig * sig);
    };
  }
  return s;
}

Strategy make_ait(const MarketModel& model, const TimeGrid& grid, const DelaySpec& delays, DivergenceHook divergence) {
  validate_model(model, grid);
  delays.validate(grid.horizon());
  if (delays.d_rate > 0.0 && !has_short_rate(model)) {
    throw InvalidArgument("d_rate > 0 requires a short-rate model (vasicek, hull_white, cir)");
  }
  if (!divergence) divergence = terminal_brownian_divergence();

  Strategy s;
  s.label = "ait";
  s.model = model_kind(model);
  s.delays = delays;
  s.insider = true;

  if (const auto* m = std::get_if<BlackScholesModel>(&model)) {
    std::vector<double> merton(grid.n_points()), inv_sigma(grid.n_points());
    for (int i = 0; i <= grid.n_steps(); ++i) {
      merton[i] = merton_bsm(m->mu, m->rho, m->sigma, grid.at(i), m->sigma_floor);
      inv_sigma[i] = 1.0 / m->sigma(grid.at(i));
    }
    s.rule = [merton = std::move(merton), inv_sigma = std::move(inv_sigma), divergence](const PathAccess& acc) {
      return merton[acc.step()] + divergence(acc) * inv_sigma[acc.step()];
    };
  } else if (const auto* h = std::get_if<HestonModel>(&model)) {
    auto mu = h->mu, rho = h->rho;
    s.rule = [mu, rho, divergence](const PathAccess& acc) {
      return ait_heston(mu, rho, acc.state_latest(), acc.t(), divergence(acc));
    };
  } else {
    const auto v = rate_view(model);
    auto data = std::make_shared<RateStrategyData>();
    data->mu = v.mu->sample(grid);
    data->sigma = sample_sigma(*v.sigma, v.floor, grid);
    fill_conditional_mean(model, grid, delays.d_rate, *data);
    s.rule = [data, divergence](const PathAccess& acc) {
      const int i = acc.step();
      const double sig = data->sigma[i];
      const double m = data->decay[i] * acc.state_latest() + data->offset[i];
      return (data->mu[i] - m) / (sig * sig) + divergence(acc) / sig;
    };
  }
  return s;
}

}  // namespace aitlab
