#include "aitlab/stochastic_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aitlab/errors.hpp"

namespace aitlab {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

void check_times(double s, double t, const char* fn) {
  if (!(s >= 0.0)) throw InvalidArgument(std::string(fn) + ": s must be >= 0");
  if (s > t) throw InvalidArgument(std::string(fn) + ": conditioning time s exceeds t");
}

// (1 - e^{-2 a h}) / (2 a), continuous at a -> 0.
double ou_variance_factor(double a, double h) {
  const double x = 2.0 * a * h;
  return x < 1e-8 ? h * (1.0 - 0.5 * x) : -std::expm1(-x) / (2.0 * a);
}

std::string feller_message(const CIRParams& p) {
  std::ostringstream os;
  os << "CIR parameters violate the Feller condition kappa*theta >= eta^2/2 (kappa*theta = "
     << p.kappa * p.theta << ", eta^2/2 = " << 0.5 * p.eta * p.eta
     << "); the square-root process can reach zero";
  return os.str();
}

std::string inverse_moment_message(const CIRParams& p) {
  std::ostringstream os;
  os << "the Merton value needs E[1/V(t)], which is finite provided kappa*theta >= eta^2 (kappa*theta = " << p.kappa * p.theta
     << ", eta^2 = " << p.eta * p.eta << "); the inverse moment diverges for these parameters";
  return os.str();
}

}  // namespace

void OUParams::validate() const {
  require_finite(a, "OU a");
  require_finite(b, "OU b");
  require_finite(xi, "OU xi");
  require_finite(r0, "OU r0");
  if (!(a > 0.0)) throw InvalidArgument("OU mean-reversion rate a must be > 0");
  if (xi < 0.0) throw InvalidArgument("OU diffusion xi must be >= 0");
}

void HWParams::validate(const TimeGrid& grid) const {
  require_finite(a, "Hull-White a");
  require_finite(theta, "Hull-White theta");
  require_finite(r0, "Hull-White r0");
  if (!(a > 0.0)) throw InvalidArgument("Hull-White mean-reversion rate a must be > 0");
  if (theta < 0.0) throw InvalidArgument("Hull-White diffusion theta must be >= 0");
  for (int i = 0; i <= grid.n_steps(); ++i) {
    if (!(kappa(grid.at(i)) > 0.0)) {
      throw InvalidArgument("Hull-White kappa(t) must be positive; fails at grid index " + std::to_string(i));
    }
  }
}

void CIRParams::validate() const {
  require_finite(kappa, "CIR kappa");
  require_finite(theta, "CIR theta");
  require_finite(eta, "CIR eta");
  require_finite(z0, "CIR z0");
  if (!(kappa > 0.0 && theta > 0.0 && eta > 0.0 && z0 > 0.0)) {
    throw InvalidArgument("CIR parameters kappa, theta, eta, z0 must all be > 0");
  }
}

// --- Brownian pair --------------------------------------------------------------------

void sample_brownian_pair(std::uint64_t seed, std::uint64_t path_index, bool with_w, PathBundle& out) {
  const int n = out.grid.n_steps();
  const double sd = std::sqrt(out.grid.dt());
  Stream bs(seed, path_index, StreamTag::brownian_b);
  out.b_incr.resize(n);
  out.b_values.resize(n + 1);
  out.b_values[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    out.b_incr[i] = sd * bs.normal();
    out.b_values[i + 1] = out.b_values[i] + out.b_incr[i];
  }
  out.b_terminal = out.b_values[n];

  if (!with_w) {
    out.w_incr.clear();
    out.w_values.clear();
    return;
  }
  Stream ws(seed, path_index, StreamTag::brownian_w);
  out.w_incr.resize(n);
  out.w_values.resize(n + 1);
  out.w_values[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    out.w_incr[i] = sd * ws.normal();
    out.w_values[i + 1] = out.w_values[i] + out.w_incr[i];
  }
}

PathBundle sample_brownian_pair(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index) {
  PathBundle out(grid);
  sample_brownian_pair(seed, path_index, true, out);
  return out;
}

// --- OU ---------------------------------------------------------------------------------

Moments ou_moments(const OUParams& p, double t) {
  if (!(p.a > 0.0)) throw InvalidArgument("ou_moments: a must be > 0");
  if (t < 0.0) throw InvalidArgument("ou_moments: t must be >= 0");
  const double e1 = std::exp(-p.a * t);
  const double e2 = e1 * e1;
  const double mean = p.r0 * e1 + p.b * (1.0 - e1);
  const double second = p.b * p.b + p.xi * p.xi * ou_variance_factor(p.a, t) + 2.0 * p.b * e1 * (p.r0 - p.b) +
                        e2 * (p.r0 - p.b) * (p.r0 - p.b);
  return {mean, second};
}

GaussianLaw ou_conditional_law(const OUParams& p, double s, double t, double r_s) {
  check_times(s, t, "ou_conditional_law");
  if (!(p.a > 0.0)) throw InvalidArgument("ou_conditional_law: a must be > 0");
  const double h = t - s;
  return {p.b - (p.b - r_s) * std::exp(-p.a * h), p.xi * p.xi * ou_variance_factor(p.a, h)};
}

void ou_exact_path(const OUParams& p, const TimeGrid& grid, std::span<const double> w_incr,
                   std::vector<double>& out) {
  const int n = grid.n_steps();
  if (w_incr.size() != static_cast<std::size_t>(n)) throw InvalidArgument("ou_exact_path: increment count mismatch");
  const double decay = std::exp(-p.a * grid.dt());
  // Rescale N(0, dt) increments to the exact step standard deviation.
  const double scale = p.xi * std::sqrt(ou_variance_factor(p.a, grid.dt()) / grid.dt());
  out.resize(n + 1);
  out[0] = p.r0;
  for (int i = 0; i < n; ++i) out[i + 1] = p.b + (out[i] - p.b) * decay + scale * w_incr[i];
}

std::vector<double> ou_exact_path(const OUParams& p, const TimeGrid& grid, std::span<const double> w_incr) {
  p.validate();
  std::vector<double> out;
  ou_exact_path(p, grid, w_incr, out);
  return out;
}

// --- Hull-White -------------------------------------------------------------------------

double hw_conditional_mean(const HWParams& p, double s, double t, double r_s, int panels) {
  check_times(s, t, "hw_conditional_mean");
  if (!(p.a > 0.0)) throw InvalidArgument("hw_conditional_mean: a must be > 0");
  const double drift = trapezoid([&](double u) { return p.kappa(u) * std::exp(-p.a * (t - u)); }, s, t, panels);
  return r_s * std::exp(-p.a * (t - s)) + drift;
}

double hw_conditional_variance(const HWParams& p, double s, double t) {
  check_times(s, t, "hw_conditional_variance");
  return p.theta * p.theta * ou_variance_factor(p.a, t - s);
}

Moments hw_moments(const HWParams& p, double t, int panels) {
  const double mean = hw_conditional_mean(p, 0.0, t, p.r0, panels);
  return {mean, mean * mean + hw_conditional_variance(p, 0.0, t)};
}

std::vector<double> hw_step_drifts(const HWParams& p, const TimeGrid& grid) {
  std::vector<double> out(grid.n_steps());
  // Keep the total panel count near 4096 on coarse grids.
  const int panels = std::max(8, (4096 + grid.n_steps() - 1) / grid.n_steps());
  for (int i = 0; i < grid.n_steps(); ++i) {
    const double lo = grid.at(i);
    const double hi = grid.at(i + 1);
    out[i] = trapezoid([&](double u) { return p.kappa(u) * std::exp(-p.a * (hi - u)); }, lo, hi, panels);
  }
  return out;
}

void hw_exact_path(const HWParams& p, const TimeGrid& grid, std::span<const double> step_drifts,
                   std::span<const double> w_incr, std::vector<double>& out) {
  const int n = grid.n_steps();
  if (w_incr.size() != static_cast<std::size_t>(n) || step_drifts.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("hw_exact_path: increment count mismatch");
  }
  const double decay = std::exp(-p.a * grid.dt());
  const double scale = p.theta * std::sqrt(ou_variance_factor(p.a, grid.dt()) / grid.dt());
  out.resize(n + 1);
  out[0] = p.r0;
  for (int i = 0; i < n; ++i) out[i + 1] = out[i] * decay + step_drifts[i] + scale * w_incr[i];
}

std::vector<double> hw_exact_path(const HWParams& p, const TimeGrid& grid, std::span<const double> w_incr) {
  p.validate(grid);
  const auto drifts = hw_step_drifts(p, grid);
  std::vector<double> out;
  hw_exact_path(p, grid, drifts, w_incr, out);
  return out;
}

// --- CIR ------------------------------------------------------------------------------

FellerReport feller_report(const CIRParams& p) noexcept { return {p.feller(), p.inverse_moment_finite()}; }

Moments cir_moments(const CIRParams& p, double t) {
  if (t < 0.0) throw InvalidArgument("cir_moments: t must be >= 0");
  const double e1 = std::exp(-p.kappa * t);
  const double mean = p.z0 * e1 + p.theta * (1.0 - e1);
  const double var = p.z0 * p.eta * p.eta / p.kappa * (e1 - e1 * e1) +
                     p.theta * p.eta * p.eta / (2.0 * p.kappa) * (1.0 - e1) * (1.0 - e1);
  return {mean, mean * mean + var};
}

double cir_conditional_mean(const CIRParams& p, double s, double t, double z_s) {
  check_times(s, t, "cir_conditional_mean");
  return p.theta + (z_s - p.theta) * std::exp(-p.kappa * (t - s));
}

double cir_step(const CIRParams& p, double z, double dt, Stream& stream) {
  const double c = p.eta * p.eta * -std::expm1(-p.kappa * dt) / (4.0 * p.kappa);
  const double dof = 4.0 * p.kappa * p.theta / (p.eta * p.eta);
  const double lambda = z * std::exp(-p.kappa * dt) / c;
  const double shifted = stream.normal() + std::sqrt(lambda);
  // chi2(k) = Gamma(k/2, 2); dof > 1 is guaranteed by the Feller condition.
  const double central = stream.gamma(0.5 * (dof - 1.0), 2.0);
  return c * (shifted * shifted + central);
}

void cir_exact_path(const CIRParams& p, const TimeGrid& grid, Stream& stream, std::vector<double>& out) {
  if (!p.feller()) throw InadmissibleModel(feller_message(p));
  const int n = grid.n_steps();
  out.resize(n + 1);
  out[0] = p.z0;
  for (int i = 0; i < n; ++i) out[i + 1] = cir_step(p, out[i], grid.dt(), stream);
}

std::vector<double> cir_exact_path(const CIRParams& p, const TimeGrid& grid, Stream& stream) {
  p.validate();
  std::vector<double> out;
  cir_exact_path(p, grid, stream, out);
  return out;
}

McEstimate cir_inverse_moment(const CIRParams& p, double t, std::int64_t n_paths, std::uint64_t seed,
                              unsigned workers) {
  p.validate();
  if (!p.inverse_moment_finite()) throw InadmissibleModel(inverse_moment_message(p));
  if (n_paths <= 0) throw InvalidArgument("cir_inverse_moment: n_paths must be positive");
  if (t < 0.0) throw InvalidArgument("cir_inverse_moment: t must be >= 0");
  std::vector<double> inv(n_paths);
  parallel_paths(n_paths, workers, [&](std::int64_t path, unsigned) {
    if (t == 0.0) {
      inv[path] = 1.0 / p.z0;
      return;
    }
    Stream s(seed, static_cast<std::uint64_t>(path), StreamTag::variance);
    inv[path] = 1.0 / cir_step(p, p.z0, t, s);
  });
  return summarize(inv, seed, 1);
}

std::vector<McEstimate> cir_inverse_moment_curve(const CIRParams& p, const TimeGrid& grid, std::int64_t n_paths,
                                                 std::uint64_t seed, unsigned workers) {
  p.validate();
  if (!p.inverse_moment_finite()) throw InadmissibleModel(inverse_moment_message(p));
  if (n_paths <= 0) throw InvalidArgument("cir_inverse_moment_curve: n_paths must be positive");
  const std::size_t np = grid.n_points();
  // Paths are reduced in fixed blocks so memory stays O(block * points) and the
  // result does not depend on the worker count.
  constexpr std::int64_t kBlock = 512;
  const std::int64_t n_blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<double> block_sum(n_blocks * np), block_sq(n_blocks * np);
  std::vector<std::vector<double>> scratch(resolve_workers(workers));
  parallel_paths(n_blocks, workers, [&](std::int64_t blk, unsigned w) {
    const std::int64_t lo = blk * kBlock;
    const std::int64_t count = std::min(kBlock, n_paths - lo);
    auto& buf = scratch[w];
    buf.assign(np * count, 0.0);
    std::vector<double> z;
    for (std::int64_t k = 0; k < count; ++k) {
      Stream s(seed, static_cast<std::uint64_t>(lo + k), StreamTag::variance);
      cir_exact_path(p, grid, s, z);
      for (std::size_t i = 0; i < np; ++i) buf[i * count + k] = 1.0 / z[i];
    }
    for (std::size_t i = 0; i < np; ++i) {
      std::span<const double> row(buf.data() + i * count, count);
      block_sum[blk * np + i] = pairwise_sum(row);
      double sq = 0.0;
      for (double v : row) sq += v * v;
      block_sq[blk * np + i] = sq;
    }
  });
  std::vector<McEstimate> out(np);
  std::vector<double> col(n_blocks), colsq(n_blocks);
  const auto n = static_cast<double>(n_paths);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::int64_t b = 0; b < n_blocks; ++b) {
      col[b] = block_sum[b * np + i];
      colsq[b] = block_sq[b * np + i];
    }
    const double mean = pairwise_sum(col) / n;
    const double var = n_paths > 1 ? std::max(0.0, (pairwise_sum(colsq) - n * mean * mean) / (n - 1.0)) : 0.0;
    out[i] = McEstimate{mean, std::sqrt(var / n), n_paths, seed, grid.n_steps(), 0};
  }
  return out;
}

// --- Market models --------------------------------------------------------------------

std::string model_kind(const MarketModel& m) {
  struct {
    std::string operator()(const BlackScholesModel&) const { return "bsm"; }
    std::string operator()(const HestonModel&) const { return "heston"; }
    std::string operator()(const VasicekModel&) const { return "vasicek"; }
    std::string operator()(const HullWhiteModel&) const { return "hull_white"; }
    std::string operator()(const CirRateModel&) const { return "cir"; }
  } v;
  return std::visit(v, m);
}

bool has_short_rate(const MarketModel& m) noexcept {
  return std::holds_alternative<VasicekModel>(m) || std::holds_alternative<HullWhiteModel>(m) ||
         std::holds_alternative<CirRateModel>(m);
}

namespace {

void check_sigma(const Curve& sigma, double floor, const TimeGrid& grid) {
  if (!(floor > 0.0)) throw InvalidArgument("volatility floor must be > 0");
  if (!volatility_floor_check(sigma, grid, floor)) {
    std::ostringstream os;
    os << "volatility curve falls below its floor " << floor << " on the grid";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

void validate_model(const MarketModel& m, const TimeGrid& grid) {
  struct {
    const TimeGrid& grid;
    void operator()(const BlackScholesModel& x) const { check_sigma(x.sigma, x.sigma_floor, grid); }
    void operator()(const HestonModel& x) const {
      x.variance.validate();
      if (!x.variance.feller()) throw InadmissibleModel(feller_message(x.variance));
      if (!x.variance.inverse_moment_finite()) throw InadmissibleModel(inverse_moment_message(x.variance));
    }
    void operator()(const VasicekModel& x) const {
      check_sigma(x.sigma, x.sigma_floor, grid);
      x.rate.validate();
    }
    void operator()(const HullWhiteModel& x) const {
      check_sigma(x.sigma, x.sigma_floor, grid);
      x.rate.validate(grid);
    }
    void operator()(const CirRateModel& x) const {
      check_sigma(x.sigma, x.sigma_floor, grid);
      x.rate.validate();
      if (!x.rate.feller()) throw InadmissibleModel(feller_message(x.rate));
    }
  } v{grid};
  std::visit(v, m);
}

}  // namespace aitlab
