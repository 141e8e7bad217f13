#include "aitlab/temporal_value.hpp"

#include <algorithm>
#include <cmath>

#include "aitlab/closed_forms.hpp"
#include "aitlab/errors.hpp"
#include "aitlab/estimate.hpp"

namespace aitlab {
namespace {

constexpr double kBracketEps = 1e-12;
constexpr int kMaxIterations = 200;

}  // namespace

double temporal_value_objective(double horizon, double d, double a, double xi, const Curve& sigma,
                                const TimeGrid& grid) {
  return two_delay_difference(horizon, d, d, OUParams{a, 0.0, xi, 0.0}, sigma, grid);
}

TemporalValueResult temporal_value(double horizon, double a, double xi, const Curve& sigma, const TimeGrid& grid,
                                   double tol) {
  if (!(horizon > 0.0)) throw InvalidArgument("temporal_value: horizon must be > 0");
  if (!(a > 0.0)) throw InvalidArgument("temporal_value: mean reversion a must be > 0");
  if (!(xi >= 0.0)) throw InvalidArgument("temporal_value: rate volatility must be >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("temporal_value: tolerance must be > 0");
  if (!volatility_floor_check(sigma, grid, 1e-12)) throw InvalidArgument("temporal_value: sigma must be positive");

  auto f = [&](double d) { return temporal_value_objective(horizon, d, a, xi, sigma, grid); };
  TemporalValueResult r;
  r.bracket_lo = kBracketEps * horizon;
  r.bracket_hi = horizon;
  const double f_hi = f(horizon);
  if (f_hi > 0.0) {
    r.kind = TemporalValueResult::Kind::infinite;
    r.residual = f_hi;
    return r;
  }
  r.kind = TemporalValueResult::Kind::finite;
  if (std::abs(f_hi) <= tol) {
    r.d_star = horizon;
    r.residual = std::abs(f_hi);
    return r;
  }
  double lo = r.bracket_lo, hi = horizon;
  if (f(lo) <= 0.0) throw NumericalError("temporal_value: f does not change sign on the bracket");
  double mid = hi, fm = f_hi;
  for (r.iterations = 1; r.iterations <= kMaxIterations; ++r.iterations) {
    mid = 0.5 * (lo + hi);
    fm = f(mid);
    if (std::abs(fm) <= tol || mid == lo || mid == hi) break;
    (fm > 0.0 ? lo : hi) = mid;
  }
  r.d_star = mid;
  r.residual = std::abs(fm);
  return r;
}

TemporalValueResult temporal_value(double horizon, const OUParams& ou, const Curve& sigma, const TimeGrid& grid,
                                   double tol) {
  ou.validate();
  return temporal_value(horizon, ou.a, ou.xi, sigma, grid, tol);
}

TemporalValueResult temporal_value(double horizon, const HWParams& hw, const Curve& sigma, const TimeGrid& grid,
                                   double tol) {
  hw.validate(grid);
  return temporal_value(horizon, hw.a, hw.theta, sigma, grid, tol);
}

std::string axis_name(SweepAxis axis) { return axis == SweepAxis::a ? "a" : "xi"; }

std::vector<double> linspace(double lo, double hi, int n) {
  if (n <= 0) throw InvalidArgument("linspace: count must be positive");
  if (hi < lo) throw InvalidArgument("linspace: range must be ordered");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1) out.back() = hi;
  return out;
}

SweepTable sweep(SweepAxis axis, std::span<const double> values, double fixed_other, double horizon,
                 const Curve& sigma, const TimeGrid& grid, double tol, unsigned workers, std::string label) {
  if (values.empty()) throw InvalidArgument("sweep: no parameter values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) && !(axis == SweepAxis::xi && values[i] == 0.0)) {
      throw InvalidArgument("sweep: parameter values must be positive");
    }
    if (i > 0 && values[i] < values[i - 1]) throw InvalidArgument("sweep: parameter values must be ordered");
  }
  SweepTable t{axis, std::move(label), std::vector<SweepRow>(values.size())};
  parallel_paths(static_cast<std::int64_t>(values.size()), workers, [&](std::int64_t i, unsigned) {
    const double a = axis == SweepAxis::a ? values[i] : fixed_other;
    const double xi = axis == SweepAxis::xi ? values[i] : fixed_other;
    t.rows[i] = SweepRow{values[i], temporal_value(horizon, a, xi, sigma, grid, tol)};
  });
  return t;
}

}  // namespace aitlab
