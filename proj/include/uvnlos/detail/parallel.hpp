// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace uvnlos::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// out[i] = f(i) for i in [0, n). Work is strided over threads; each slot is
/// written by exactly one task, so results do not depend on the thread count.
template <class T, class F>
std::vector<T> parallel_map(int n, int threads, F&& f) {
  std::vector<T> out(static_cast<size_t>(std::max(n, 0)));
  const int nt = std::clamp(resolve_threads(threads), 1, std::max(n, 1));
  if (nt == 1) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += nt) out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace uvnlos::detail
