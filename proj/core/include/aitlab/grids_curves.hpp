#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "aitlab/errors.hpp"

namespace aitlab {

/// Uniform grid t_i = i * T / n on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, int n_steps);

  double horizon() const noexcept { return horizon_; }
  int n_steps() const noexcept { return n_steps_; }
  double dt() const noexcept { return dt_; }
  std::size_t n_points() const noexcept { return static_cast<std::size_t>(n_steps_) + 1; }

  /// t_i; the last point is exactly the horizon.
  double at(int i) const noexcept { return i == n_steps_ ? horizon_ : i * dt_; }

  /// Largest index i with t_i <= t (up to a relative 1e-9 snap), clamped to [0, n].
  int index_at_or_below(double t) const noexcept;

  std::vector<double> points() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double horizon_;
  int n_steps_;
  double dt_;
};

struct Knot {
  double t;
  double value;
  bool operator==(const Knot&) const = default;
};

/// Deterministic coefficient curve: a constant or piecewise-linear over knots.
class Curve {
 public:
  Curve() : Curve(constant(0.0)) {}

  static Curve constant(double value);
  /// Knots must be strictly increasing in t and contain at least two entries.
  static Curve piecewise_linear(std::vector<Knot> knots);

  double operator()(double t) const noexcept;

  bool is_constant() const noexcept { return std::holds_alternative<double>(rep_); }
  double constant_value() const { return std::get<double>(rep_); }
  const std::vector<Knot>& knots() const { return std::get<std::vector<Knot>>(rep_); }

  std::vector<double> sample(const TimeGrid& grid) const;

  bool operator==(const Curve&) const = default;

 private:
  using Rep = std::variant<double, std::vector<Knot>>;
  explicit Curve(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Composite trapezoid over grid samples; throws NumericalError naming the
/// first non-finite index.
double integrate(std::span<const double> samples, const TimeGrid& grid);
double integrate(const Curve& curve, const TimeGrid& grid);

template <class F>
  requires std::is_invocable_r_v<double, F, double>
double integrate(F&& f, const TimeGrid& grid) {
  std::vector<double> samples(grid.n_points());
  for (int i = 0; i <= grid.n_steps(); ++i) samples[i] = f(grid.at(i));
  return integrate(std::span<const double>(samples), grid);
}

/// Trapezoid on [lo, hi] with n uniform panels. Used where a kink has to sit on
/// a panel boundary; lo == hi gives 0.
template <class F>
double trapezoid(F&& f, double lo, double hi, int n) {
  if (n <= 0) throw InvalidArgument("trapezoid: panel count must be positive");
  if (hi < lo) throw InvalidArgument("trapezoid: hi < lo");
  if (hi == lo) return 0.0;
  const double h = (hi - lo) / n;
  double acc = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) acc += f(lo + i * h);
  const double result = acc * h;
  if (!std::isfinite(result)) throw NumericalError("trapezoid: non-finite integrand");
  return result;
}

/// True iff curve(t_i) >= floor at every grid point (inclusive).
bool volatility_floor_check(const Curve& curve, const TimeGrid& grid, double floor);

}  // namespace aitlab
