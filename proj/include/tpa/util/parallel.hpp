#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tpa::util {

// Runs f(i) for i in [0, count) on up to `workers` threads. Each index is
// computed independently, so results written to slot i are identical for any
// worker count. The first exception (lowest index) is rethrown.
template <class F>
void parallel_for(size_t count, int workers, F&& f) {
  const size_t w = std::min<size_t>(count, static_cast<size_t>(std::max(1, workers)));
  if (w <= 1) {
    for (size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex m;
  size_t err_index = count;
  std::exception_ptr err;
  auto run = [&] {
    for (size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t t = 1; t < w; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace tpa::util
