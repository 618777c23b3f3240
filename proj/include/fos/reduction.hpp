#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fos {

// How large sums are evaluated.  With deterministic=true the result is a
// function of the index range only: the range is cut into fixed-size blocks,
// each block is summed sequentially, and the block partials are combined in
// block order.  The same blocking is used at every thread count (including
// one), so thread count never changes a single bit of the result.
struct ReductionMode {
  int threads = 1;
  bool deterministic = true;
};

inline constexpr std::size_t kReductionBlock = 4096;

// Sums range_sum(b0, b1) over consecutive blocks [b0, b1) covering [0, n).
inline double blocked_sum(std::size_t n, const ReductionMode& mode,
                          const std::function<double(std::size_t, std::size_t)>& range_sum) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;

  auto block_bounds = [n](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    return std::pair<std::size_t, std::size_t>(lo, hi);
  };

  const int threads = mode.threads;
  if (threads <= 1 || nblocks == 1) {
    double total = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
      auto [lo, hi] = block_bounds(b);
      total += range_sum(lo, hi);
    }
    return total;
  }

  if (mode.deterministic) {
    std::vector<double> partial(nblocks, 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= nblocks) return;
        auto [lo, hi] = block_bounds(b);
        partial[b] = range_sum(lo, hi);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    double total = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) total += partial[b];
    return total;
  }

  // Fast path: block partials folded in completion order.
  double total = 0.0;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    double local = 0.0;
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) break;
      auto [lo, hi] = block_bounds(b);
      local += range_sum(lo, hi);
    }
    std::lock_guard<std::mutex> lock(mu);
    total += local;
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return total;
}

// Runs range_fn(lo, hi) over a partition of [0, n); used for per-node output
// arrays where every index is written by exactly one worker.
inline void blocked_for(std::size_t n, int threads,
                        const std::function<void(std::size_t, std::size_t)>& range_fn) {
  if (n == 0) return;
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (threads <= 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      range_fn(b * kReductionBlock, std::min(n, (b + 1) * kReductionBlock));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      range_fn(b * kReductionBlock, std::min(n, (b + 1) * kReductionBlock));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace fos
