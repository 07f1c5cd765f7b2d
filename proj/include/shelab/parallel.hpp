#pragma once

// Replica-parallel execution with results that do not depend on the worker
// count: work is split into fixed chunks and reduced in chunk-index order.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace shelab::parallel {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Calls fn(i) for i in [0, n) on `workers` threads. fn must only write to
/// state owned by index i.
template <class Fn>
void for_each_index(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(body);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// Maps fixed chunks [k*chunk, min(n, (k+1)*chunk)) to accumulators with
/// `map(begin, end)` and folds them into `init` strictly in chunk order with
/// `fold(Acc&, Acc&&)`. Chunk boundaries depend only on (n, chunk).
template <class Acc, class Map, class Fold>
Acc ordered_map_reduce(std::size_t n, std::size_t chunk, unsigned workers, Acc init, Map&& map,
                       Fold&& fold) {
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  workers = std::max(1u, workers);
  if (workers == 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fold(init, map(c * chunk, std::min(n, (c + 1) * chunk)));
    return init;
  }
  std::vector<std::optional<Acc>> slots(n_chunks);
  std::mutex m;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        Acc acc = map(c * chunk, std::min(n, (c + 1) * chunk));
        std::lock_guard lock(m);
        slots[c].emplace(std::move(acc));
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
        next.store(n_chunks);
      }
      cv.notify_all();
    }
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks));
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(body);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    std::optional<Acc> item;
    {
      std::unique_lock lock(m);
      cv.wait(lock, [&] { return slots[c].has_value() || error != nullptr; });
      if (error) break;
      item.swap(slots[c]);
    }
    fold(init, std::move(*item));
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
  return init;
}

}  // namespace shelab::parallel
