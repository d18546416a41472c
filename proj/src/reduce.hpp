#pragma once

// Deterministic parallel reduction over an index range. The range is cut into
// fixed-size blocks independent of the thread count; each block is reduced
// serially in index order and the block partials are merged along a fixed
// pairwise tree, so the result is bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fei::detail {

inline constexpr std::uint64_t kReduceBlock = 4096;

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// `reduce_block(begin, end)` returns a Partial; Partial::merge(right) folds a
/// right neighbour into the left one.
template <class Partial, class BlockFn>
Partial blocked_reduce(std::uint64_t count, unsigned threads, BlockFn&& reduce_block) {
  const std::uint64_t blocks = (count + kReduceBlock - 1) / kReduceBlock;
  if (blocks == 0) return Partial{};
  std::vector<Partial> partials(blocks);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= blocks) break;
        const std::uint64_t begin = b * kReduceBlock;
        const std::uint64_t end = std::min(count, begin + kReduceBlock);
        partials[b] = reduce_block(begin, end);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(blocks, std::memory_order_relaxed);
    }
  };

  const auto workers = static_cast<std::uint64_t>(resolve_threads(threads));
  const unsigned spawned =
      static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks)) - 1;
  std::vector<std::thread> pool;
  pool.reserve(spawned);
  for (unsigned t = 0; t < spawned; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (std::uint64_t width = 1; width < blocks; width *= 2)
    for (std::uint64_t i = 0; i + width < blocks; i += 2 * width)
      partials[i].merge(partials[i + width]);
  return std::move(partials[0]);
}

/// Streaming mean and sum of squared deviations (Welford, Chan merge), plus
/// raw power sums, which stay exact when the inputs are dyadic with few bits.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void push(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Moments& right) {
    if (right.count == 0) return;
    sum += right.sum;
    sum_sq += right.sum_sq;
    if (count == 0) {
      const double s = sum, sq = sum_sq;
      *this = right;
      sum = s;
      sum_sq = sq;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(right.count);
    const double total = na + nb;
    const double d = right.mean - mean;
    mean += d * nb / total;
    m2 += right.m2 + d * d * na * nb / total;
    count += right.count;
  }

  double population_variance() const { return m2 / static_cast<double>(count); }
  double sample_variance() const { return m2 / static_cast<double>(count - 1); }
};

}  // namespace fei::detail
