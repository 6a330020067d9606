#pragma once

#include <functional>
#include <vector>

namespace kglab {

// Worker count: LAB_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs fn(0..n-1) on up to worker_count() threads. Results keep index order;
// the first exception (by index) is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& fn);

template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& fn) {
  std::vector<T> out(static_cast<size_t>(n));
  parallel_for(n, [&](int i) { out[static_cast<size_t>(i)] = fn(i); });
  return out;
}

}  // namespace kglab
