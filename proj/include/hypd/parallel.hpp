#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace hypd {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Run fn(i) for i in [0, count). Work items must write to disjoint state;
// callers do any reductions afterwards in index order so results do not
// depend on the thread count.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::min(resolve_threads(threads), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([t, threads, count, &fn] {
      for (int i = t; i < count; i += threads) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

} // namespace hypd
