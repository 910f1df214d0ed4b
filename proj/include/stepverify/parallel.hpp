#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace stepverify {

/// Applies `fn(index)` for every index in [0, count) using up to `workers`
/// threads and returns the results indexed by input position, so the
/// worker count never changes what callers observe.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<Result> results(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      results[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned n = std::min<std::size_t>(workers, count);
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  return results;
}

}  // namespace stepverify
