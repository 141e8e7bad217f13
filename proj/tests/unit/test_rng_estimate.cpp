#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>

#include "aitlab/errors.hpp"
#include "aitlab/estimate.hpp"
#include "aitlab/rng.hpp"

using namespace aitlab;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, ReproducibleAndDistinct) {
  Stream a(7, 3, StreamTag::brownian_b), b(7, 3, StreamTag::brownian_b);
  Stream c(7, 4, StreamTag::brownian_b), d(7, 3, StreamTag::brownian_w), e(8, 3, StreamTag::brownian_b);
  const double x = a.normal();
  EXPECT_EQ(x, b.normal());
  EXPECT_NE(x, c.normal());
  EXPECT_NE(x, d.normal());
  EXPECT_NE(x, e.normal());
}

TEST(Stream, NormalMoments) {
  Stream s(11, 0, StreamTag::auxiliary);
  const int n = 200000;
  double m = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m += z;
    m2 += z * z;
  }
  m /= n;
  m2 /= n;
  EXPECT_LT(std::abs(m), 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Stream, UniformInUnitInterval) {
  Stream s(1, 1, StreamTag::auxiliary);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Stream, CrossStreamCorrelationSmall) {
  const int n = 50000;
  double sxy = 0;
  for (int i = 0; i < n; ++i) {
    Stream b(5, i, StreamTag::brownian_b), w(5, i, StreamTag::brownian_w);
    sxy += b.normal() * w.normal();
  }
  EXPECT_LT(std::abs(sxy / n), 4.0 / std::sqrt(n));
}

TEST(PairwiseSum, MatchesExactSums) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(PairwiseSum, BetterThanNaiveOnSmallIncrements) {
  std::vector<double> v(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 0.1 * (1 << 20), 1e-7);
}

TEST(Summarize, MeanAndStdError) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto e = summarize(v, 9, 10);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(e.n_paths, 4);
  EXPECT_EQ(e.seed, 9u);
  EXPECT_EQ(e.n_steps, 10);
}

TEST(Summarize, RejectsNonFinite) {
  EXPECT_THROW(summarize(std::vector<double>{1.0, NAN}, 1, 1), NumericalError);
  EXPECT_THROW(summarize(std::vector<double>{}, 1, 1), InvalidArgument);
}

TEST(ParallelPaths, VisitsEachIndexOnceForAnyWorkerCount) {
  for (unsigned w : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(10007);
    parallel_paths(10007, w, [&](std::int64_t i, unsigned worker) {
      ASSERT_LT(worker, resolve_workers(w));
      hits[i].fetch_add(1);
    });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(ParallelPaths, RethrowsWorkerException) {
  EXPECT_THROW(parallel_paths(1000, 2,
                              [](std::int64_t i, unsigned) {
                                if (i == 517) throw NumericalError("boom");
                              }),
               NumericalError);
}
