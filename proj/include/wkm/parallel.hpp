#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace wkm::detail {

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, total), using up
/// to `threads` worker threads. fn must only write to slots it owns, so the
/// result is identical for any thread count. The first exception thrown by a
/// worker is rethrown after all workers join.
inline void parallel_chunks(size_t total, unsigned threads,
                            const std::function<void(size_t, size_t)>& fn) {
  if (total == 0) return;
  const size_t workers = std::min<size_t>(threads == 0 ? 1 : threads, total);
  if (workers <= 1) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const size_t chunk = (total + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(total, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace wkm::detail
