#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ctrlcap::numerics {

/// Worker count for jobs <= 0: the hardware concurrency (at least 1).
inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Runs f(i) for i in [0, count) on up to `jobs` threads. Each index runs
/// exactly once; the exception of the lowest failing index is rethrown, so
/// results stay independent of scheduling.
template <class F>
void parallel_for(std::size_t count, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            f(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ctrlcap::numerics
