#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crabot {

// Number of workers to use when the caller passes 0: CRABOT_WORKERS if set
// to a positive integer, otherwise the hardware concurrency.
unsigned default_worker_count();

inline unsigned resolve_workers(unsigned requested) {
  return requested == 0 ? default_worker_count() : requested;
}

// Runs body(i) for every i in [0, count) on up to `workers` threads. Work is
// handed out dynamically, so body must only write to slots owned by i. The
// first exception thrown by any body is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, resolve_workers(workers));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t thread_count =
      std::min<std::size_t>(workers, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(thread_count - 1);
  for (std::size_t t = 1; t < thread_count; ++t) threads.emplace_back(run);
  run();
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace crabot
