#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rydsim {

// Run fn(i) for i in [0, n) on up to `threads` workers (0 = hardware count).
// Work is split into contiguous blocks; fn must only write to per-index
// state, so results are identical for any thread count.  The first exception
// thrown by any worker is rethrown here.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned want = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  if (want < 1) want = 1;
  if (want > n) want = static_cast<unsigned>(n);
  if (want == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(want);
  const std::size_t block = (n + want - 1) / want;
  for (unsigned w = 0; w < want; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * block;
      const std::size_t hi = std::min(n, lo + block);
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rydsim
