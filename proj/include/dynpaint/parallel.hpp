#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace dynpaint {

/// Default worker count: the hardware concurrency, at least 1.
inline int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Splits [0, rows) into contiguous bands and runs fn(begin, end) on each,
/// one band per worker. Bands write disjoint outputs, so results do not
/// depend on the worker count. The first exception thrown is rethrown.
template <typename Fn>
void parallel_rows(int rows, int threads, Fn&& fn) {
  const int workers = std::clamp(threads, 1, std::max(rows, 1));
  if (workers == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int begin = int(long(rows) * w / workers);
    const int end = int(long(rows) * (w + 1) / workers);
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dynpaint
