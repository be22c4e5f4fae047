#pragma once

// Reductions whose floating-point result does not depend on the number of
// worker threads: leaves are grouped into fixed-size blocks, each block is
// reduced by a pairwise tree, and block results are combined by the same
// pairwise tree in block order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace holder {

/// Streaming pairwise (binary-counter) accumulator. The combination tree
/// depends only on the number of pushed values.
template <class T, class Combine>
class PairwiseAccumulator {
 public:
  explicit PairwiseAccumulator(Combine combine) : combine_(combine) {}

  void push(T value) {
    std::size_t level = 0;
    while (true) {
      if (level == slots_.size()) {
        slots_.emplace_back(std::move(value));
        return;
      }
      if (!slots_[level]) {
        slots_[level] = std::move(value);
        return;
      }
      value = combine_(std::move(*slots_[level]), std::move(value));
      slots_[level].reset();
      ++level;
    }
  }

  /// Empty accumulators return `identity`.
  T result(T identity) const {
    std::optional<T> acc;
    for (const auto& slot : slots_) {
      if (!slot) continue;
      acc = acc ? combine_(*slot, *acc) : *slot;
    }
    return acc ? *acc : identity;
  }

 private:
  Combine combine_;
  std::vector<std::optional<T>> slots_;
};

/// log(e^a + e^b) without overflow; -inf acts as the identity.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

inline unsigned resolve_workers(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; the first exception thrown is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Reduces [0, n) split into blocks of `block` leaves. block_fn(begin, end)
/// returns the (pairwise) reduction of one block; results are merged in
/// block order with a pairwise tree, so the value is worker-count invariant.
template <class T, class BlockFn, class Combine>
T deterministic_reduce(std::uint64_t n, std::uint64_t block, unsigned workers,
                       BlockFn block_fn, Combine combine, T identity) {
  if (n == 0) return identity;
  block = std::max<std::uint64_t>(block, 1);
  const std::uint64_t blocks = (n + block - 1) / block;
  std::vector<T> partial(static_cast<std::size_t>(blocks), identity);
  parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
    const std::uint64_t begin = b * block;
    const std::uint64_t end = std::min(n, begin + block);
    partial[b] = block_fn(begin, end);
  });
  PairwiseAccumulator<T, Combine> acc(combine);
  for (auto& v : partial) acc.push(std::move(v));
  return acc.result(identity);
}

}  // namespace holder
