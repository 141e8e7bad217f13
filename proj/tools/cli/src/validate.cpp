#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "aitlab/cli/commands.hpp"
#include "aitlab/closed_forms.hpp"
#include "aitlab/forward_mc.hpp"
#include "aitlab/hermite_wick.hpp"
#include "aitlab/temporal_value.hpp"

namespace aitlab::cli {
namespace {

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// |x - target| in units of se, reported as "x vs target (k SE)".
std::pair<bool, std::string> within_3se(double x, double se, double target) {
  const double k = std::abs(x - target) / se;
  return {k <= 3.0, g(x) + " vs " + g(target) + " (" + g(k) + " SE)"};
}

constexpr const char* kRoundTripConfig = R"([grid]
horizon = 1
n_steps = 100
[model]
kind = hull_white
a = 1
theta = 0.1
r0 = 0.03
[curve.mu]
knots = (0, 0.08), (0.5, 0.09), (1, 0.07)
[curve.sigma]
constant = 0.2
floor = 0.01
[curve.kappa]
constant = 0.05
[strategy]
d_stock = 0.1, 0.3
d_rate = 0.2
)";

}  // namespace

std::vector<CheckResult> validation_suite(std::uint64_t seed, unsigned workers) {
  std::vector<CheckResult> out;
  auto run = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
      auto [ok, detail] = body();
      out.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  SimulationOptions mc{20'000, seed, workers, 1e6};

  run("grid: trapezoid exact on a piecewise-linear curve", [] {
    const TimeGrid grid(1.0, 10);
    const auto c = Curve::piecewise_linear({{0.0, 1.0}, {0.5, 2.0}, {1.0, 0.0}});
    const double v = integrate(c, grid);
    return std::pair{std::abs(v - 1.25) < 1e-14, g(v) + " vs 1.25"};
  });

  run("closed form: insider gain positive and nonincreasing in d", [] {
    double prev = INFINITY;
    for (int k = 1; k <= 100; ++k) {
      const double v = delta_v_single_delay(1.0, k / 100.0);
      if (!(v > 0.0) || v > prev) return std::pair{false, "fails at d = " + g(k / 100.0)};
      prev = v;
    }
    return std::pair{std::abs(prev - 0.5) < 1e-15, "d = T gives " + g(prev)};
  });

  run("closed form: two-delay difference decreasing in xi and d_rate", [] {
    const TimeGrid grid(1.0, 200);
    const auto sigma = Curve::constant(0.2);
    double prev = INFINITY;
    for (double xi : {0.0, 0.05, 0.1, 0.5, 1.0, 2.0}) {
      const double v = two_delay_difference(1.0, 0.3, 0.3, OUParams{1.0, 0.05, xi, 0.03}, sigma, grid);
      if (!(v < prev)) return std::pair{false, "not decreasing at xi = " + g(xi)};
      prev = v;
    }
    prev = INFINITY;
    for (double dr : {0.0, 0.1, 0.3, 0.6, 1.0}) {
      const double v = two_delay_difference(1.0, 0.3, dr, OUParams{1.0, 0.05, 0.5, 0.03}, sigma, grid);
      if (!(v < prev)) return std::pair{false, "not decreasing at d_rate = " + g(dr)};
      prev = v;
    }
    return std::pair{true, std::string("checked on 6 xi and 5 d_rate values")};
  });

  run("hermite: Gauss-Hermite orthogonality, n, m <= 8", [] {
    const auto rule = gauss_hermite_normal(40);
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n) {
      for (int m = 0; m <= 8; ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * hermite(n, rule.nodes[i]) * hermite(m, rule.nodes[i]);
        const double expect = n == m ? std::tgamma(n + 1.0) : 0.0;
        worst = std::max(worst, std::abs(s - expect));
      }
    }
    return std::pair{worst < 1e-8, "max error " + g(worst)};
  });

  run("wick: power recurrence, n <= 10", [] {
    double worst = 0.0;
    for (double norm : {0.5, 1.0, 2.0}) {
      for (double v : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
        for (int n = 1; n <= 10; ++n) worst = std::max(worst, wick_power_recurrence_check({norm, 0.0, v}, n));
      }
    }
    return std::pair{worst < 1e-10, "max residual " + g(worst)};
  });

  run("wick: Wick exponential vs ordinary exponential", [] {
    double worst = 0.0;
    for (double y : {-2.0, -0.5, 0.0, 0.7, 1.5}) {
      for (double c2 : {0.0, 0.1, 0.4, 0.8}) worst = std::max(worst, wick_vs_ordinary_exp_check(y, c2));
    }
    return std::pair{worst < 1e-10, "max residual " + g(worst)};
  });

  run("donsker: conditional density integrates to one", [] {
    const double mass = trapezoid([](double x) { return donsker_conditional_density(x, 0.3, 0.4, 1.0); }, -10.0, 10.0, 20'000);
    return std::pair{std::abs(mass - 1.0) < 1e-6, "mass " + g(mass)};
  });

  run("cir: Feller / inverse-moment truth table", [] {
    const CIRParams both{2.0, 0.04, 0.2, 0.04}, feller_only{1.0, 0.04, 0.25, 0.04}, neither{1.0, 0.01, 0.3, 0.01};
    const bool ok = feller_report(both).positive_as && feller_report(both).inverse_moment_finite &&
                    feller_report(feller_only).positive_as && !feller_report(feller_only).inverse_moment_finite &&
                    !feller_report(neither).positive_as && !feller_report(neither).inverse_moment_finite;
    bool refused = false;
    try {
      validate_model(HestonModel{Curve::constant(0.08), Curve::constant(0.02), feller_only}, TimeGrid(1.0, 10));
    } catch (const InadmissibleModel&) {
      refused = true;
    }
    return std::pair{ok && refused, std::string(ok ? "table ok" : "table wrong") + (refused ? ", heston refused" : ", heston accepted")};
  });

  run("ou: moments vs exact-path MC", [&] {
    const OUParams p{1.0, 0.05, 0.1, 0.03};
    const TimeGrid grid(1.0, 50);
    std::vector<double> terminal(mc.n_paths);
    PathBundle bundle(grid);
    std::vector<double> r;
    for (std::int64_t i = 0; i < mc.n_paths; ++i) {
      sample_brownian_pair(seed, static_cast<std::uint64_t>(i), true, bundle);
      ou_exact_path(p, grid, bundle.w_incr, r);
      terminal[i] = r.back();
    }
    const auto est = summarize(terminal, seed, grid.n_steps());
    return within_3se(est.mean, est.std_error, ou_moments(p, 1.0).mean);
  });

  run("cir: exact paths positive, mean vs MC", [&] {
    const CIRParams p{2.0, 0.04, 0.2, 0.04};
    const TimeGrid grid(1.0, 50);
    std::vector<double> terminal(mc.n_paths), z;
    bool positive = true;
    for (std::int64_t i = 0; i < mc.n_paths; ++i) {
      Stream s(seed, static_cast<std::uint64_t>(i), StreamTag::variance);
      cir_exact_path(p, grid, s, z);
      for (double v : z) positive = positive && v > 0.0;
      terminal[i] = z.back();
    }
    const auto est = summarize(terminal, seed, grid.n_steps());
    auto [ok, detail] = within_3se(est.mean, est.std_error, cir_moments(p, 1.0).mean);
    return std::pair{ok && positive, detail + (positive ? "" : ", non-positive value seen")};
  });

  run("cir: E[1/Z] between Jensen and Gronwall bounds", [&] {
    const CIRParams p{2.0, 0.04, 0.2, 0.04};
    const auto est = cir_inverse_moment(p, 1.0, mc.n_paths, seed, workers);
    const double upper = std::exp(p.kappa) / p.z0, lower = 1.0 / cir_moments(p, 1.0).mean;
    const bool ok = est.mean <= upper + 3 * est.std_error && est.mean >= lower - 3 * est.std_error;
    return std::pair{ok, g(lower) + " <= " + g(est.mean) + " <= " + g(upper)};
  });

  run("forward integral: E[int alpha_d d-B] = d/T + ln(T/d), d = 0.5", [&] {
    const TimeGrid grid(1.0, 200);
    const double d = 0.5;
    const auto est = mc_forward_integral(
        grid, d, [&](const PathAccess& a) { return alpha_d(a.t(), a.g(), a.b_latest(), 1.0, d); }, mc);
    return within_3se(est.mean, est.std_error, d + std::log(1.0 / d));
  });

  run("forward mc: BSM insider advantage, d = 0.25", [&] {
    const TimeGrid grid(1.0, 250);
    const BlackScholesModel m{Curve::constant(0.08), Curve::constant(0.02), Curve::constant(0.2)};
    const auto est = mc_delta_v(m, DelaySpec{0.25, 0.0}, grid, mc);
    return within_3se(est.mean, est.std_error, delta_v_single_delay(1.0, 0.25));
  });

  run("forward mc: Vasicek two-delay difference", [&] {
    const TimeGrid grid(1.0, 250);
    const OUParams ou{1.0, 0.05, 0.1, 0.03};
    const VasicekModel m{Curve::constant(0.08), Curve::constant(0.2), 1e-6, ou};
    const auto est = mc_delta_v(m, DelaySpec{0.3, 0.3}, grid, mc);
    return within_3se(est.mean, est.std_error, two_delay_difference(1.0, 0.3, 0.3, ou, Curve::constant(0.2), grid));
  });

  run("strategies: reading B beyond the delayed limit is refused", [] {
    const TimeGrid grid(1.0, 10);
    const auto bundle = sample_brownian_pair(grid, 1, 0);
    const InsiderInfo ins{InsiderKind::terminal_brownian, bundle.b_terminal};
    const PathAccess acc(bundle, {}, 5, 2, 5, &ins);
    try {
      (void)acc.b(3);
    } catch (const MeasurabilityViolation&) {
      return std::pair{true, std::string("refused")};
    }
    return std::pair{false, std::string("read allowed")};
  });

  run("temporal value: xi = 0 infinite, large xi finite with tiny residual", [] {
    const TimeGrid grid(1.0, 1000);
    const auto sigma = Curve::constant(0.2);
    const auto none = temporal_value(1.0, 1.0, 0.0, sigma, grid);
    const auto big = temporal_value(1.0, 1.0, 10.0, sigma, grid);
    const bool ok = !none.finite() && big.finite() && big.residual <= 1e-10 && big.d_star > 0.0 && big.d_star <= 1.0;
    return std::pair{ok, "d*(xi=10) = " + g(big.d_star) + ", residual " + g(big.residual)};
  });

  run("temporal value: d* nonincreasing along a xi sweep, one boundary crossing", [&] {
    const TimeGrid grid(1.0, 400);
    const auto xs = linspace(0.0, 3.0, 31);
    const auto t = sweep(SweepAxis::xi, xs, 1.0, 1.0, Curve::constant(0.2), grid, kTemporalValueTol, workers);
    int crossings = 0;
    double prev = INFINITY;
    bool monotone = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i].result;
      if (i > 0 && r.finite() != t.rows[i - 1].result.finite()) ++crossings;
      const double v = r.finite() ? r.d_star : INFINITY;
      if (v > prev) monotone = false;
      prev = v;
    }
    return std::pair{monotone && crossings == 1, std::to_string(crossings) + " boundary crossing(s)"};
  });

  run("config: parse -> serialize -> parse is the identity", [] {
    const auto a = parse_config(kRoundTripConfig, "<builtin>");
    const auto b = parse_config(serialize_config(a), "<serialized>");
    return std::pair{a == b && serialize_config(b) == serialize_config(a), std::string(a == b ? "identical" : "differs")};
  });

  return out;
}

int run_validate(const CommandOptions& opts, std::ostream& out) {
  const auto results = validation_suite(opts.seed.value_or(20261017), opts.workers);
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ') << r.detail
        << '\n';
    failed += r.passed ? 0 : 1;
  }
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitTolerance;
}

}  // namespace aitlab::cli
