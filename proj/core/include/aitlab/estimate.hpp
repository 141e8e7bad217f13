#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace aitlab {

/// Monte Carlo mean with its standard error and the metadata needed to
/// reproduce it.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n_paths)
  std::int64_t n_paths = 0;
  std::uint64_t seed = 0;
  int n_steps = 0;
  std::int64_t clamp_events = 0;  // |pi| clamp activations, see SimulationOptions::pi_max
};

/// Pairwise (cascade) summation; the tree shape depends only on the length.
double pairwise_sum(std::span<const double> values) noexcept;

/// Mean / SE of per-path values. Two-pass, both passes pairwise.
McEstimate summarize(std::span<const double> per_path, std::uint64_t seed, int n_steps);

/// Number of worker threads to use for `requested` (0 = hardware concurrency).
unsigned resolve_workers(unsigned requested) noexcept;

/// Runs body(path_index, worker_id) for every index in [0, n) across at most
/// `workers` threads; worker_id < returned worker count and can index per-worker
/// scratch. Each index is visited exactly once; body must only write to its own
/// slot. The first exception thrown by any worker is rethrown after all join.
void parallel_paths(std::int64_t n, unsigned workers,
                    const std::function<void(std::int64_t, unsigned)>& body);

}  // namespace aitlab
