#pragma once

#include <vector>

namespace aitlab {

/// Highest Hermite order the recurrence will evaluate.
inline constexpr int kMaxHermiteOrder = 64;

/// Probabilists' Hermite polynomial h_n(x) = E[(x + iZ)^n], by the upward
/// recurrence h_{n+1} = x h_n - n h_{n-1}. Throws InvalidArgument for n outside
/// [0, kMaxHermiteOrder].
double hermite(int n, double x);

/// Realized value of a (possibly non-centered) smoothed white noise
/// omega_{phi,psi} = Psi + int phi dB. `norm` is ||phi||, `shift` is Psi and
/// `value` is the sampled omega_{phi,psi} (shift included).
struct SmoothedWhiteNoise {
  double norm = 1.0;
  double shift = 0.0;
  double value = 0.0;
};

/// omega^{<>n} = ||phi||^n h_n(omega / ||phi||). Throws NumericalError when the
/// result overflows; the message names the offending order.
double wick_power(const SmoothedWhiteNoise& w, int n);

/// Same Wick power expanded binomially in the shift,
/// sum_k C(n,k) Psi^k ||phi||^{n-k} h_{n-k}((omega - Psi)/||phi||).
double wick_power_binomial(const SmoothedWhiteNoise& w, int n);

/// Relative residual of omega^{<>(n+1)} = omega * omega^{<>n} - n ||phi||^2 omega^{<>(n-1)}.
double wick_power_recurrence_check(const SmoothedWhiteNoise& w, int n);

/// Density of B(T) at g given B(s) = b_delayed: N(b_delayed, T - s).
double donsker_conditional_density(double g, double b_delayed, double s, double T);

/// Checks omega <> exp<>(-omega^{<>2}/2) = omega exp<>(-omega^{<>2}/2) / (1 - c2)
/// for a window of variance c2 and realized value y. The left side is evaluated
/// as the Gaussian expectation E[(y + icZ) exp(-(y + icZ)^2/2)] by Gauss-Hermite
/// quadrature in complex arithmetic; the right side uses the closed form
/// E[exp(-(y + icZ)^2/2)] = (1 - c2)^{-1/2} exp(-y^2 / (2 (1 - c2))).
/// Returns |lhs - rhs| / max(1, |rhs|). c2 must lie in [0, 1).
double wick_vs_ordinary_exp_check(double y, double c2);

/// n-point Gauss-Hermite rule for the standard normal weight:
/// sum_i w_i f(x_i) ~ E[f(Z)], weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_hermite_normal(int n);

}  // namespace aitlab
