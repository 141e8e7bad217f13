#include <gtest/gtest.h>

#include <cmath>

#include "aitlab/closed_forms.hpp"

using namespace aitlab;

namespace {

const Curve kMu = Curve::constant(0.08), kRho = Curve::constant(0.02), kSigma = Curve::constant(0.2);
const OUParams kOu{1.0, 0.05, 0.1, 0.03};
const TimeGrid kGrid(1.0, 1000);

}  // namespace

TEST(DeltaV, OracleValues) {
  EXPECT_NEAR(delta_v_single_delay(1.0, 0.1), 1.201292546497023, 1e-15);
  EXPECT_NEAR(delta_v_single_delay(1.0, 0.25), 0.8181471805599453, 1e-15);
  EXPECT_NEAR(delta_v_single_delay(1.0, 0.5), 0.5965735902799727, 1e-15);
  EXPECT_EQ(delta_v_single_delay(1.0, 1.0), 0.5);
}

TEST(DeltaV, PositiveAndDecreasing) {
  double prev = INFINITY;
  for (int k = 1; k <= 400; ++k) {
    const double v = delta_v_single_delay(2.0, 2.0 * k / 400);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(DeltaV, RejectsDelaysOutsideHorizon) {
  EXPECT_THROW(delta_v_single_delay(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(delta_v_single_delay(1.0, 1.0 + 1e-12), InvalidArgument);
  EXPECT_THROW(delta_v_single_delay(1.0, -0.2), InvalidArgument);
}

TEST(VMertonBsm, Examples) {
  EXPECT_NEAR(v_merton_bsm(kMu, kRho, kSigma, kGrid), 0.065, 1e-15);
  EXPECT_NEAR(v_merton_bsm(kRho, kRho, kSigma, kGrid), 0.02, 1e-15);
  const double doubled = v_merton_bsm(kMu, kRho, Curve::constant(0.4), kGrid) - 0.02;
  EXPECT_NEAR(doubled, 0.045 / 4, 1e-15);
  EXPECT_THROW(v_merton_bsm(kMu, kRho, Curve::constant(1e-9), kGrid), InvalidArgument);
}

TEST(VMertonHeston, OracleAndBounds) {
  const CIRParams cir{2.0, 0.04, 0.2, 0.04};
  const TimeGrid g(1.0, 100);
  const auto v = v_merton_heston(kMu, kRho, cir, g, 20000, 3);
  EXPECT_LT(std::abs(v.value - 0.07615301068179928), 3 * v.std_error + 1e-5);
  const double upper = integrate([&](double t) { return 0.5 * 0.0036 * std::exp(cir.kappa * t) / cir.z0 + 0.02; }, g);
  const double jensen = integrate([&](double t) { return 0.5 * 0.0036 / cir_moments(cir, t).mean + 0.02; }, g);
  EXPECT_LE(v.value, upper + 3 * v.std_error);
  EXPECT_GE(v.value, jensen - 3 * v.std_error);
}

TEST(VMertonHeston, NearlyDeterministicVarianceReducesToBsm) {
  const CIRParams cir{2.0, 0.04, 1e-4, 0.04};
  const auto v = v_merton_heston(kMu, kRho, cir, TimeGrid(1.0, 50), 2000, 3);
  EXPECT_NEAR(v.value, 0.065, 1e-5);
}

TEST(VMertonHeston, RefusedWhenInverseMomentInfinite) {
  try {
    v_merton_heston(kMu, kRho, CIRParams{1.0, 0.04, 0.25, 0.04}, kGrid, 100, 1);
    FAIL();
  } catch (const InadmissibleModel& e) {
    EXPECT_NE(std::string(e.what()).find("finite provided"), std::string::npos);
  }
}

TEST(VMertonVasicek, OracleValue) {
  EXPECT_NEAR(v_merton_vasicek(kMu, kSigma, kOu, kGrid), 0.09573028659890984, 1e-7);
}

TEST(VMertonVasicek, NoNoiseAtEquilibriumIsBsm) {
  const OUParams flat{1.0, 0.05, 0.0, 0.05};
  EXPECT_NEAR(v_merton_vasicek(kMu, kSigma, flat, kGrid), v_merton_bsm(kMu, Curve::constant(0.05), kSigma, kGrid),
              1e-14);
}

TEST(VMertonVasicek, FastReversionLimit) {
  // R pinned at b plus a variance correction xi^2/(2a) / (2 sigma^2) away from t = 0.
  const double a = 1e3;
  const OUParams fast{a, 0.05, 0.1, 0.05};
  const double bsm = v_merton_bsm(kMu, Curve::constant(0.05), kSigma, kGrid);
  const double corr = 0.01 / (2 * a) / (2 * 0.04);
  EXPECT_NEAR(v_merton_vasicek(kMu, kSigma, fast, kGrid), bsm + corr, 1e-6);
}

TEST(VMertonVasicek, AtLeastExpectedRate) {
  for (double xi : {0.0, 0.1, 0.5}) {
    const OUParams p{1.0, 0.05, xi, 0.03};
    EXPECT_GE(v_merton_vasicek(kMu, kSigma, p, kGrid), integrate([&](double t) { return ou_moments(p, t).mean; }, kGrid));
  }
}

TEST(TwoDelay, OracleValues) {
  EXPECT_NEAR(two_delay_difference(1.0, 0.3, 0.3, kOu, kSigma, kGrid), 0.7275965476141434, 1e-9);
  EXPECT_NEAR(two_delay_difference(1.0, 0.3, 0.3, OUParams{1.0, 0.05, 2.0, 0.03}, kSigma, kGrid), -9.003955417366898,
              1e-7);
  EXPECT_NEAR(two_delay_difference(1.0, 0.25, 0.5, OUParams{1.0, 0.05, 0.5, 0.03}, kSigma, kGrid), 0.03689718055994551,
              1e-8);
}

TEST(TwoDelay, ReducesToSingleDelay) {
  EXPECT_EQ(two_delay_difference(1.0, 0.3, 0.0, kOu, kSigma, kGrid), delta_v_single_delay(1.0, 0.3));
  EXPECT_EQ(two_delay_difference(1.0, 0.3, 0.3, OUParams{1.0, 0.05, 0.0, 0.03}, kSigma, kGrid),
            delta_v_single_delay(1.0, 0.3));
}

TEST(TwoDelay, DecreasingInNoiseAndRateDelay) {
  double prev = INFINITY;
  for (double xi : {0.0, 0.01, 0.1, 0.3, 1.0, 3.0}) {
    const double v = two_delay_difference(1.0, 0.4, 0.4, OUParams{2.0, 0.0, xi, 0.0}, kSigma, kGrid);
    EXPECT_LT(v, prev);
    prev = v;
  }
  prev = INFINITY;
  for (double dr : {0.0, 0.05, 0.2, 0.5, 1.0}) {
    const double v = two_delay_difference(1.0, 0.4, dr, kOu, kSigma, kGrid);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(TwoDelay, TimeVaryingSigmaKinkHandled) {
  const auto sigma = Curve::piecewise_linear({{0.0, 0.2}, {0.3, 0.3}, {1.0, 0.25}});
  const double a = 1.0, d = 0.45;
  auto integrand = [&](double t) {
    return -std::expm1(-2 * a * std::min(t, d)) / (sigma(t) * sigma(t));
  };
  const double fine = trapezoid(integrand, 0.0, 0.3, 20000) + trapezoid(integrand, 0.3, d, 20000) +
                      trapezoid(integrand, d, 1.0, 20000);
  EXPECT_NEAR(delay_variance_integral(1.0, d, a, sigma, 4096), fine, 1e-6);
}

TEST(TwoDelayHw, SameFormulaWithTheta) {
  const HWParams hw{Curve::constant(0.05), 1.0, 0.1, 0.03};
  EXPECT_EQ(two_delay_difference_hw(1.0, DelaySpec{0.3, 0.3}, hw, kSigma, kGrid),
            two_delay_difference(1.0, 0.3, 0.3, kOu, kSigma, kGrid));
  const HWParams quiet{Curve::constant(0.05), 1.0, 0.0, 0.03};
  EXPECT_EQ(two_delay_difference_hw(1.0, DelaySpec{0.3, 0.3}, quiet, kSigma, kGrid), delta_v_single_delay(1.0, 0.3));
}

TEST(Report, ComposesPieces) {
  const BlackScholesModel bsm{kMu, kRho, kSigma};
  const auto r = closed_form_report(bsm, DelaySpec{0.25, 0.0}, kGrid, 10, 1);
  EXPECT_NEAR(r.v_merton, 0.065, 1e-15);
  ASSERT_TRUE(r.delta_v && r.v_ait);
  EXPECT_NEAR(*r.v_ait, 0.065 + 0.8181471805599453, 1e-14);
  EXPECT_FALSE(r.delta_v_source.empty());
}

TEST(Report, NoClosedFormForCirRateWithDelayedRate) {
  const CirRateModel cir{kMu, kSigma, 1e-6, CIRParams{1.0, 0.05, 0.1, 0.03}};
  const auto r = closed_form_report(cir, DelaySpec{0.3, 0.2}, kGrid, 10, 1);
  EXPECT_FALSE(r.delta_v.has_value());
  EXPECT_FALSE(r.v_ait.has_value());
  EXPECT_TRUE(closed_form_report(cir, DelaySpec{0.3, 0.0}, kGrid, 10, 1).delta_v.has_value());
}

TEST(Report, CirRateMertonUsesExactMoments) {
  const CIRParams p{1.0, 0.05, 0.1, 0.03};
  const double expect = integrate(
      [&](double t) {
        const auto m = cir_moments(p, t);
        return (0.0064 - 0.16 * m.mean + m.second_moment) / 0.08 + m.mean;
      },
      kGrid);
  EXPECT_NEAR(v_merton_cir_rate(kMu, kSigma, p, kGrid), expect, 1e-14);
}
