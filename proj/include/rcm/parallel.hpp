#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace rcm::par {

// Worker-pool width for row-parallel loops. Every loop partitions indices
// into contiguous chunks and each index writes only its own slot, so results
// are identical for any thread count.
void set_threads(int t);
int threads();

template <class F>
void parallel_for(std::int64_t n, F&& f) {
  const int t = threads();
  if (t <= 1 || n < 2048) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + t - 1) / t;
  for (int w = 0; w < t; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (std::int64_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace rcm::par
