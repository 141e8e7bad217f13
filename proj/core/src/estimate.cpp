#include "aitlab/estimate.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>

#include "aitlab/errors.hpp"

namespace aitlab {

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate summarize(std::span<const double> per_path, std::uint64_t seed, int n_steps) {
  if (per_path.empty()) throw InvalidArgument("summarize: no samples");
  const auto n = static_cast<double>(per_path.size());
  const double mean = pairwise_sum(per_path) / n;
  std::vector<double> sq(per_path.size());
  for (std::size_t i = 0; i < per_path.size(); ++i) {
    const double dev = per_path[i] - mean;
    sq[i] = dev * dev;
  }
  const double var = per_path.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  McEstimate est;
  est.mean = mean;
  est.std_error = std::sqrt(var / n);
  est.n_paths = static_cast<std::int64_t>(per_path.size());
  est.seed = seed;
  est.n_steps = n_steps;
  if (!std::isfinite(est.mean) || !std::isfinite(est.std_error)) {
    throw NumericalError("summarize: non-finite Monte Carlo estimate");
  }
  return est;
}

unsigned resolve_workers(unsigned requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_paths(std::int64_t n, unsigned workers,
                    const std::function<void(std::int64_t, unsigned)>& body) {
  workers = static_cast<unsigned>(std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(n, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i, 0);
    return;
  }
  constexpr std::int64_t kChunk = 256;
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&](unsigned id) {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::int64_t lo = next.fetch_add(kChunk);
        if (lo >= n) break;
        const std::int64_t hi = std::min(n, lo + kChunk);
        for (std::int64_t i = lo; i < hi; ++i) body(i, id);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed = true;
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace aitlab
