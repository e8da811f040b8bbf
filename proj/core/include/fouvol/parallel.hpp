#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fouvol {

/// Runs fn(block) for block in [0, n_blocks) on up to `workers` threads.
/// Blocks are independent units of work with their own random streams, so the
/// caller's ordered reduction over per-block results is identical for any
/// worker count. The first exception thrown by a block is rethrown.
template <class Fn>
void parallel_blocks(std::size_t n_blocks, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(run);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace fouvol
