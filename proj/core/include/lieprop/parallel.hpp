#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lieprop {

/// Number of worker threads used by parallel_for; at least one.
inline unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/**
 * Calls fn(i) for every i in [0, n), distributing indices over worker
 * threads. Results must be written to per-index storage; the first
 * exception thrown by any call is rethrown on the calling thread.
 */
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/**
 * Sum of map(i) over [0, n). Partial sums are formed over fixed-size chunks
 * and combined in index order, so the floating-point result does not depend
 * on the number of threads.
 */
template <class T, class Map>
T chunked_sum(std::size_t n, const T& zero, Map&& map, std::size_t chunk = 4096) {
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(chunks, zero);
  parallel_for(chunks, [&](std::size_t c) {
    T acc = zero;
    const std::size_t end = std::min(n, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) acc += map(i);
    partial[c] = acc;
  });
  T total = zero;
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace lieprop
