// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FLUXQP_PARALLEL_HPP
#define FLUXQP_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fluxqp {

// Run fn(i) for i in [0, n) on up to n_threads worker threads. Each index is
// processed exactly once and results must be written to index-addressed
// slots, so the output is independent of thread count and scheduling. With
// n_threads <= 1 the loop runs inline.
inline void parallel_for(int n, const std::function<void(int)>& fn, int n_threads) {
  if (n <= 0) return;
  if (n_threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(n_threads, n);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fluxqp

#endif  // FLUXQP_PARALLEL_HPP
