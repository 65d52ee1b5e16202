#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace twistlab {

// Worker budget: hardware concurrency capped by the TWISTLAB_THREADS
// environment variable (a pure performance knob; results never depend on
// the thread count because every item writes its own slot).
inline int thread_budget() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  n = std::min(n, 16);
  if (const char* env = std::getenv("TWISTLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<int>(std::min(cap, 64L)));
  }
  return n;
}

// Runs body(i) for i in [0, count) over contiguous chunks. body must only
// write to per-index state.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& body,
                         int threads = -1) {
  if (threads < 1) threads = thread_budget();
  if (threads == 1 || count < 2048) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace twistlab
