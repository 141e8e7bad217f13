#include "aitlab/hermite_wick.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "aitlab/errors.hpp"

namespace aitlab {

double hermite(int n, double x) {
  if (n < 0 || n > kMaxHermiteOrder) {
    throw InvalidArgument("hermite: order " + std::to_string(n) + " outside [0, " +
                          std::to_string(kMaxHermiteOrder) + "]");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double wick_power(const SmoothedWhiteNoise& w, int n) {
  if (!(w.norm > 0.0)) throw InvalidArgument("wick_power: norm must be > 0");
  const double v = std::pow(w.norm, n) * hermite(n, w.value / w.norm);
  if (!std::isfinite(v)) {
    throw NumericalError("wick_power: overflow at order " + std::to_string(n));
  }
  return v;
}

double wick_power_binomial(const SmoothedWhiteNoise& w, int n) {
  if (!(w.norm > 0.0)) throw InvalidArgument("wick_power_binomial: norm must be > 0");
  const double centered = (w.value - w.shift) / w.norm;
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    acc += binom * std::pow(w.shift, k) * std::pow(w.norm, n - k) * hermite(n - k, centered);
    binom = binom * (n - k) / (k + 1);
  }
  return acc;
}

double wick_power_recurrence_check(const SmoothedWhiteNoise& w, int n) {
  if (n < 1) throw InvalidArgument("wick_power_recurrence_check: n must be >= 1");
  const double lhs = wick_power(w, n + 1);
  const double rhs = w.value * wick_power(w, n) - n * w.norm * w.norm * wick_power(w, n - 1);
  const double scale = std::max({std::abs(lhs), std::abs(w.value * wick_power(w, n)), 1.0});
  return std::abs(lhs - rhs) / scale;
}

double donsker_conditional_density(double g, double b_delayed, double s, double T) {
  if (s < 0.0) throw InvalidArgument("donsker_conditional_density: s must be >= 0");
  if (s >= T) throw InvalidArgument("donsker_conditional_density: degenerate conditioning, s >= T");
  const double v = T - s;
  const double z = g - b_delayed;
  return std::exp(-z * z / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
}

QuadratureRule gauss_hermite_normal(int n) {
  if (n < 1) throw InvalidArgument("gauss_hermite_normal: n must be >= 1");
  // Newton on orthonormal physicists' Hermite functions (weight e^{-x^2}),
  // then x -> sqrt(2) x and w -> w / sqrt(pi).
  constexpr int kMaxIter = 100;
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
    rule.weights[i] = w[n - 1 - i] / std::sqrt(std::numbers::pi);
  }
  return rule;
}

double wick_vs_ordinary_exp_check(double y, double c2) {
  if (!(c2 >= 0.0 && c2 < 1.0)) {
    throw InvalidArgument("wick_vs_ordinary_exp_check: window variance must lie in [0, 1); at 1 the product vanishes");
  }
  static const QuadratureRule rule = gauss_hermite_normal(96);
  const double c = std::sqrt(c2);
  // E[f(y + icZ)] with the Gaussian factor e^{c2 z^2/2} of the integrand folded
  // into the weight: Z = U / sqrt(1 - c2) with U standard normal.
  const double shrink = 1.0 / std::sqrt(1.0 - c2);
  std::complex<double> lhs = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double zi = rule.nodes[i] * shrink;
    const std::complex<double> x(y, c * zi);
    // exp(-x^2/2) * exp(-z^2/2) = exp(-(y^2 + 2icyz)/2) * exp(-(1 - c2) z^2 / 2)
    const std::complex<double> f = x * std::exp(std::complex<double>(-0.5 * y * y, -c * y * zi));
    lhs += rule.weights[i] * f;
  }
  lhs *= shrink;
  const double one_minus = 1.0 - c2;
  const double ordinary = std::exp(-y * y / (2.0 * one_minus)) / std::sqrt(one_minus);
  const double rhs = y * ordinary / one_minus;
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

}  // namespace aitlab
