#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace stein {

// Worker cap: STEIN_THREADS when set, hardware concurrency otherwise.
inline int worker_count(std::size_t jobs) {
  long n = 0;
  if (const char* env = std::getenv("STEIN_THREADS")) n = std::atol(env);
  if (n <= 0) n = static_cast<long>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(n < static_cast<long>(jobs) ? n : static_cast<long>(jobs));
}

// Runs fn(i) for i in [0,count).  Callers write results to per-index
// slots, so output ordering is independent of completion order.  The
// first exception thrown by a worker is rethrown after the join.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mx;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mx);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stein
