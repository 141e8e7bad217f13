#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace aitlab {

/// Which driving process a stream feeds. Distinct tags give statistically
/// independent streams for the same (seed, path).
enum class StreamTag : std::uint32_t {
  brownian_b = 1,  // stock noise B
  brownian_w = 2,  // rate noise W
  variance = 3,    // CIR / Heston variance transitions
  auxiliary = 4,   // test and diagnostic draws
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Raw block for a counter value; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

/// Per-(seed, path, tag) random stream. Reproducible and independent of which
/// worker thread evaluates the path.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t path_index, StreamTag tag) noexcept;

  double normal() { return normal_(engine_); }
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  Philox4x32& engine() noexcept { return engine_; }

 private:
  Philox4x32 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace aitlab
