#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mgibbs {

namespace detail {
inline std::atomic<std::size_t>& default_worker_slot() {
  static std::atomic<std::size_t> workers{0};
  return workers;
}
}  // namespace detail

/// Process-wide cap on parallel width; 0 means hardware concurrency.
inline void set_default_workers(std::size_t workers) { detail::default_worker_slot() = workers; }

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested == 0) requested = detail::default_worker_slot();
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// Evaluates `task(chunk)` for chunk = 0..chunks-1 and returns the results in
/// chunk order. The chunk decomposition is fixed by the caller, so any reduction
/// over the returned vector is independent of how many workers ran.
template <class Result, class Task>
std::vector<Result> run_chunks(std::size_t chunks, std::size_t workers, Task&& task) {
  std::vector<Result> out(chunks);
  workers = std::min(resolve_workers(workers), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = task(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        out[c] = task(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace mgibbs
