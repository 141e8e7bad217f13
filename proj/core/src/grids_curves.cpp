#include "aitlab/grids_curves.hpp"

#include <algorithm>
#include <string>

namespace aitlab {

TimeGrid::TimeGrid(double horizon, int n_steps) : horizon_(horizon), n_steps_(n_steps), dt_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("TimeGrid: horizon must be positive and finite");
  }
  if (n_steps <= 0) throw InvalidArgument("TimeGrid: n_steps must be positive");
  dt_ = horizon / n_steps;
}

int TimeGrid::index_at_or_below(double t) const noexcept {
  if (t <= 0.0) return 0;
  if (t >= horizon_) return n_steps_;
  const double x = t / dt_;
  // Snap values that are a grid point up to rounding.
  const auto i = static_cast<int>(std::floor(x + 1e-9 * std::max(1.0, x)));
  return std::clamp(i, 0, n_steps_);
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(n_points());
  for (int i = 0; i <= n_steps_; ++i) out[i] = at(i);
  return out;
}

Curve Curve::constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("Curve: constant value must be finite");
  return Curve(Rep{value});
}

Curve Curve::piecewise_linear(std::vector<Knot> knots) {
  if (knots.size() < 2) throw InvalidArgument("Curve: piecewise-linear curve needs at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].t) || !std::isfinite(knots[i].value)) {
      throw InvalidArgument("Curve: knot " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(knots[i].t > knots[i - 1].t)) {
      throw InvalidArgument("Curve: knot times must be strictly increasing (knot " + std::to_string(i) + ")");
    }
  }
  return Curve(Rep{std::move(knots)});
}

double Curve::operator()(double t) const noexcept {
  if (const auto* c = std::get_if<double>(&rep_)) return *c;
  const auto& k = std::get<std::vector<Knot>>(rep_);
  if (t <= k.front().t) return k.front().value;
  if (t >= k.back().t) return k.back().value;
  const auto hi = std::upper_bound(k.begin(), k.end(), t, [](double x, const Knot& kn) { return x < kn.t; });
  const auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->value + w * (hi->value - lo->value);
}

std::vector<double> Curve::sample(const TimeGrid& grid) const {
  std::vector<double> out(grid.n_points());
  for (int i = 0; i <= grid.n_steps(); ++i) out[i] = (*this)(grid.at(i));
  return out;
}

double integrate(std::span<const double> samples, const TimeGrid& grid) {
  if (samples.size() != grid.n_points()) {
    throw InvalidArgument("integrate: expected " + std::to_string(grid.n_points()) + " samples, got " +
                          std::to_string(samples.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw NumericalError("integrate: non-finite sample at grid index " + std::to_string(i));
    }
  }
  double acc = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) acc += samples[i];
  return acc * grid.dt();
}

double integrate(const Curve& curve, const TimeGrid& grid) {
  const auto s = curve.sample(grid);
  return integrate(std::span<const double>(s), grid);
}

bool volatility_floor_check(const Curve& curve, const TimeGrid& grid, double floor) {
  if (!(floor > 0.0)) throw InvalidArgument("volatility_floor_check: floor must be positive");
  for (int i = 0; i <= grid.n_steps(); ++i) {
    if (!(curve(grid.at(i)) >= floor)) return false;
  }
  return true;
}

}  // namespace aitlab
