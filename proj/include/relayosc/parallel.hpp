#pragma once

// Minimal work distribution: indices are handed out one at a time to a fixed
// set of threads and the first exception is rethrown on the caller's thread.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace relayosc {

[[nodiscard]] inline std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

template <class F>
void parallel_for(std::size_t count, F&& fn, std::size_t threads = 0) {
  if (count == 0) return;
  const std::size_t workers = worker_count(threads, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace relayosc
