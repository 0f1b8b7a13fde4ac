#pragma once

// Worker-count policy and a deterministic "first index satisfying pred" scan.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace adeleforge {

/// ADELEFORGE_THREADS if set and positive, else 1.
inline unsigned worker_count() {
  if (const char* s = std::getenv("ADELEFORGE_THREADS")) {
    try {
      int n = std::stoi(s);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Smallest i < n with pred(i). Workers take strided indices; the result is
/// the global minimum, so it does not depend on the worker count.
template <class Pred>
std::optional<std::size_t> parallel_find_first(std::size_t n, Pred pred, unsigned workers = worker_count()) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      if (pred(i)) return i;
    return std::nullopt;
  }
  std::atomic<std::size_t> best{n};
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n && i < best.load(); i += workers) {
          if (pred(i)) {
            std::size_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            return;
          }
        }
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  if (best.load() == n) return std::nullopt;
  return best.load();
}

}  // namespace adeleforge
