#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gibbsprep {

/// Worker cap for data-parallel loops. Reads GIBBSPREP_MAX_THREADS once;
/// values < 1 (or an unset variable) fall back to hardware concurrency.
inline unsigned max_workers() {
  static const unsigned cached = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GIBBSPREP_MAX_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), 256u);
    }
    return std::min(hw, 16u);
  }();
  return cached;
}

/// Runs fn(i) for i in [0, n). Deterministic result requirement is on the
/// caller: fn must write only to slot i of preallocated storage.
template <typename Fn>
void parallel_for(long n, Fn&& fn) {
  if (n <= 0) return;
  unsigned workers = std::min<unsigned>(max_workers(), static_cast<unsigned>(n));
  if (workers <= 1 || n < 256) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  long chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    long lo = w * chunk;
    long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gibbsprep
