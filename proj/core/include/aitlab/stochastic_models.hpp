#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aitlab/estimate.hpp"
#include "aitlab/grids_curves.hpp"
#include "aitlab/rng.hpp"

namespace aitlab {

/// Vasicek short rate dR = a (b - R) dt + xi dW, R(0) = r0.
struct OUParams {
  double a = 1.0;
  double b = 0.0;
  double xi = 0.0;
  double r0 = 0.0;

  void validate() const;
  bool operator==(const OUParams&) const = default;
};

/// One-factor Hull-White dR = (kappa(t) - a R) dt + theta dW, R(0) = r0.
struct HWParams {
  Curve kappa;
  double a = 1.0;
  double theta = 0.0;
  double r0 = 0.0;

  void validate(const TimeGrid& grid) const;
  bool operator==(const HWParams&) const = default;
};

/// Square-root diffusion dZ = kappa (theta - Z) dt + eta sqrt(Z) dW, Z(0) = z0.
/// Used for the Heston variance and for the CIR short rate.
struct CIRParams {
  double kappa = 1.0;
  double theta = 1.0;
  double eta = 1.0;
  double z0 = 1.0;

  void validate() const;
  /// kappa*theta >= eta^2/2: the process stays strictly positive. Both checks are
  /// inclusive, with 1e-12 relative slack so exact equality survives rounding.
  bool feller() const noexcept { return kappa * theta >= 0.5 * eta * eta * (1.0 - 1e-12); }
  /// kappa*theta >= eta^2: E[1/Z(t)] is finite.
  bool inverse_moment_finite() const noexcept { return kappa * theta >= eta * eta * (1.0 - 1e-12); }
  bool operator==(const CIRParams&) const = default;
};

struct Moments {
  double mean;
  double second_moment;
  double variance() const noexcept { return second_moment - mean * mean; }
};

struct GaussianLaw {
  double mean;
  double variance;
};

struct FellerReport {
  bool positive_as;
  bool inverse_moment_finite;
};

/// One joint trajectory of the independent Brownian pair (B, W).
struct PathBundle {
  explicit PathBundle(const TimeGrid& g) : grid(g) {}

  TimeGrid grid;
  std::vector<double> b_incr;
  std::vector<double> w_incr;    // empty when sampled without W
  std::vector<double> b_values;  // B(t_0..t_n), B(0) = 0
  std::vector<double> w_values;
  double b_terminal = 0.0;
};

PathBundle sample_brownian_pair(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index);

/// In-place variant that reuses the bundle's storage. With with_w == false only B
/// is drawn and the W fields are left empty; the B stream is the same either way.
void sample_brownian_pair(std::uint64_t seed, std::uint64_t path_index, bool with_w, PathBundle& out);

// --- Ornstein-Uhlenbeck (Vasicek) ---------------------------------------------------

Moments ou_moments(const OUParams& p, double t);
GaussianLaw ou_conditional_law(const OUParams& p, double s, double t, double r_s);

/// Exact Gaussian transition driven by the W increments (rescaled to the exact
/// step variance). Returns R(t_0..t_n).
std::vector<double> ou_exact_path(const OUParams& p, const TimeGrid& grid, std::span<const double> w_incr);
void ou_exact_path(const OUParams& p, const TimeGrid& grid, std::span<const double> w_incr,
                   std::vector<double>& out);

// --- Hull-White -----------------------------------------------------------------------

/// r_s e^{-a(t-s)} + int_s^t kappa(u) e^{-a(t-u)} du, the integral by trapezoid
/// with `panels` panels.
double hw_conditional_mean(const HWParams& p, double s, double t, double r_s, int panels = 2048);
double hw_conditional_variance(const HWParams& p, double s, double t);
Moments hw_moments(const HWParams& p, double t, int panels = 2048);

/// Deterministic part of each exact step: int_{t_i}^{t_{i+1}} kappa(u) e^{-a(t_{i+1}-u)} du.
std::vector<double> hw_step_drifts(const HWParams& p, const TimeGrid& grid);
std::vector<double> hw_exact_path(const HWParams& p, const TimeGrid& grid, std::span<const double> w_incr);
void hw_exact_path(const HWParams& p, const TimeGrid& grid, std::span<const double> step_drifts,
                   std::span<const double> w_incr, std::vector<double>& out);

// --- CIR / Heston variance ------------------------------------------------------------

FellerReport feller_report(const CIRParams& p) noexcept;

/// Moments of the exact law; see decisions about the printed second moment.
Moments cir_moments(const CIRParams& p, double t);
double cir_conditional_mean(const CIRParams& p, double s, double t, double z_s);

/// One exact transition Z(t) -> Z(t + dt): scaled noncentral chi-square with
/// 4 kappa theta / eta^2 degrees of freedom, drawn as (N + sqrt(lambda))^2 + chi2(dof - 1).
double cir_step(const CIRParams& p, double z, double dt, Stream& stream);

/// Throws InadmissibleModel when the Feller condition fails.
std::vector<double> cir_exact_path(const CIRParams& p, const TimeGrid& grid, Stream& stream);
void cir_exact_path(const CIRParams& p, const TimeGrid& grid, Stream& stream, std::vector<double>& out);

/// MC estimate of E[1/Z(t)] from single exact transitions 0 -> t.
/// Throws InadmissibleModel unless kappa*theta >= eta^2.
McEstimate cir_inverse_moment(const CIRParams& p, double t, std::int64_t n_paths, std::uint64_t seed,
                              unsigned workers = 0);

/// E[1/Z(t_i)] at every grid point from shared exact paths.
std::vector<McEstimate> cir_inverse_moment_curve(const CIRParams& p, const TimeGrid& grid, std::int64_t n_paths,
                                                 std::uint64_t seed, unsigned workers = 0);

// --- Market models --------------------------------------------------------------------

struct BlackScholesModel {
  Curve mu, rho, sigma;
  double sigma_floor = 1e-6;
  bool operator==(const BlackScholesModel&) const = default;
};

struct HestonModel {
  Curve mu, rho;
  CIRParams variance;
  bool operator==(const HestonModel&) const = default;
};

struct VasicekModel {
  Curve mu, sigma;
  double sigma_floor = 1e-6;
  OUParams rate;
  bool operator==(const VasicekModel&) const = default;
};

struct HullWhiteModel {
  Curve mu, sigma;
  double sigma_floor = 1e-6;
  HWParams rate;
  bool operator==(const HullWhiteModel&) const = default;
};

struct CirRateModel {
  Curve mu, sigma;
  double sigma_floor = 1e-6;
  CIRParams rate;
  bool operator==(const CirRateModel&) const = default;
};

using MarketModel = std::variant<BlackScholesModel, HestonModel, VasicekModel, HullWhiteModel, CirRateModel>;

/// "bsm", "heston", "vasicek", "hull_white", "cir".
std::string model_kind(const MarketModel& m);

/// True for the short-rate models (rate observed through W).
bool has_short_rate(const MarketModel& m) noexcept;

/// Applies every admissibility rule: volatility floors, kappa(t) > 0, Feller for
/// square-root processes, and kappa*theta >= eta^2 for Heston. Throws
/// InvalidArgument or InadmissibleModel.
void validate_model(const MarketModel& m, const TimeGrid& grid);

}  // namespace aitlab
