#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace editbench {

// Runs fn(i) for i in [0, n) on up to max_threads workers. Results are the
// caller's responsibility (write into pre-sized slots indexed by i so the
// outcome is schedule-independent). The first exception wins and is
// rethrown after all workers join.
inline void parallel_for_indexed(std::size_t n, std::size_t max_threads,
                                 const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers = std::min(max_threads == 0 ? 1 : max_threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::size_t next = 0;
  auto worker = [&]() {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error || next >= n) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace editbench
