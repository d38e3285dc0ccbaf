#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace latrule {

/// Caps worker threads used by library operations. 0 restores the default
/// (hardware concurrency).
void set_thread_limit(unsigned n);
unsigned thread_limit();

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// thread_limit() workers. The first exception thrown by any worker is
/// rethrown on the caller's thread.
template <class Body>
void parallel_chunks(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_limit(), n);
  if (workers <= 1) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = w * step, end = std::min(n, begin + step);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace latrule
