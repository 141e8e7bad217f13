#include <gtest/gtest.h>

#include <cmath>

#include "aitlab/grids_curves.hpp"

using namespace aitlab;

TEST(TimeGrid, PointsAndSpacing) {
  const TimeGrid g(1.0, 4);
  EXPECT_EQ(g.n_points(), 5u);
  EXPECT_DOUBLE_EQ(g.dt(), 0.25);
  EXPECT_DOUBLE_EQ(g.at(2), 0.5);
  EXPECT_EQ(g.at(4), 1.0);
}

TEST(TimeGrid, LastPointIsExactlyHorizon) {
  for (int n : {3, 7, 999, 1000}) {
    const TimeGrid g(0.7, n);
    EXPECT_EQ(g.at(n), 0.7);
  }
}

TEST(TimeGrid, RejectsBadInput) {
  EXPECT_THROW(TimeGrid(0.0, 10), InvalidArgument);
  EXPECT_THROW(TimeGrid(-1.0, 10), InvalidArgument);
  EXPECT_THROW(TimeGrid(1.0, 0), InvalidArgument);
  EXPECT_THROW(TimeGrid(NAN, 10), InvalidArgument);
}

TEST(TimeGrid, IndexAtOrBelowSnapsRoundoff) {
  const TimeGrid g(1.0, 1000);
  EXPECT_EQ(g.index_at_or_below(0.3), 300);
  EXPECT_EQ(g.index_at_or_below(0.7 - 0.4), 300);  // 0.29999999999999993
  EXPECT_EQ(g.index_at_or_below(0.3005), 300);
  EXPECT_EQ(g.index_at_or_below(-0.2), 0);
  EXPECT_EQ(g.index_at_or_below(5.0), 1000);
}

TEST(TimeGrid, IndexPropertyHolds) {
  const TimeGrid g(2.0, 37);
  for (int k = 0; k <= 1000; ++k) {
    const double t = 2.0 * k / 1000;
    const int i = g.index_at_or_below(t);
    EXPECT_LE(g.at(i), t * (1 + 1e-9) + 1e-15);
    if (i < g.n_steps()) {
      EXPECT_GT(g.at(i + 1), t);
    }
  }
}

TEST(Curve, ConstantAndKnots) {
  const auto c = Curve::constant(0.2);
  EXPECT_TRUE(c.is_constant());
  EXPECT_EQ(c(0.3), 0.2);
  const auto p = Curve::piecewise_linear({{0.0, 1.0}, {1.0, 3.0}});
  EXPECT_DOUBLE_EQ(p(0.5), 2.0);
  EXPECT_EQ(p(-1.0), 1.0);  // clamped outside the knots
  EXPECT_EQ(p(2.0), 3.0);
}

TEST(Curve, RejectsBadKnots) {
  EXPECT_THROW(Curve::piecewise_linear({{0.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Curve::piecewise_linear({{0.0, 1.0}, {0.0, 2.0}}), InvalidArgument);
  EXPECT_THROW(Curve::piecewise_linear({{0.5, 1.0}, {0.2, 2.0}}), InvalidArgument);
  EXPECT_THROW(Curve::constant(INFINITY), InvalidArgument);
}

TEST(Integrate, ConstantIsExact) {
  EXPECT_NEAR(integrate(Curve::constant(0.02), TimeGrid(1.0, 1000)), 0.02, 1e-15);
}

TEST(Integrate, LinearIsExact) {
  const TimeGrid g(2.0, 3);
  EXPECT_NEAR(integrate([](double t) { return 3 * t + 1; }, g), 8.0, 1e-14);
}

TEST(Integrate, SecondOrderConvergence) {
  auto f = [](double t) { return std::exp(t); };
  const double exact = std::exp(1.0) - 1.0;
  const double e1 = std::abs(integrate(f, TimeGrid(1.0, 100)) - exact);
  const double e2 = std::abs(integrate(f, TimeGrid(1.0, 200)) - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.01);
}

TEST(Integrate, KinkedIntegrandAgainstOracle) {
  // int_0^1 1/(1 - (t - 0.5)^+) dt = 0.5 + ln 2
  auto f = [](double t) { return 1.0 / (1.0 - std::max(t - 0.5, 0.0)); };
  EXPECT_NEAR(integrate(f, TimeGrid(1.0, 10000)), 1.1931471830599454, 1e-12);
  EXPECT_NEAR(integrate(f, TimeGrid(1.0, 10000)), 1.1931471805599454, 1e-8);
}

TEST(Integrate, NamesNonFiniteIndex) {
  const TimeGrid g(1.0, 4);
  std::vector<double> v{1, 1, NAN, 1, 1};
  try {
    integrate(v, g);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos);
  }
  EXPECT_THROW(integrate(std::vector<double>{1, 2}, g), InvalidArgument);
}

TEST(Trapezoid, Basics) {
  EXPECT_DOUBLE_EQ(trapezoid([](double) { return 2.0; }, 0.0, 0.0, 5), 0.0);
  EXPECT_NEAR(trapezoid([](double t) { return t; }, 1.0, 3.0, 7), 4.0, 1e-14);
  EXPECT_THROW(trapezoid([](double) { return 1.0; }, 1.0, 0.0, 5), InvalidArgument);
}

TEST(VolatilityFloor, InclusiveOnGrid) {
  const TimeGrid g(1.0, 10);
  EXPECT_TRUE(volatility_floor_check(Curve::constant(0.1), g, 0.1));
  EXPECT_FALSE(volatility_floor_check(Curve::piecewise_linear({{0, 0.2}, {1, 0.05}}), g, 0.1));
  EXPECT_THROW(volatility_floor_check(Curve::constant(0.1), g, 0.0), InvalidArgument);
}
