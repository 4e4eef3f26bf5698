#ifndef ECC_PARALLEL_HPP_
#define ECC_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ecc {

inline unsigned effective_threads(unsigned requested) noexcept {
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/*
 * Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
 * concurrency). Work is handed out by index, so results written to slot i
 * are identical for every thread count. The first exception thrown by any
 * task is rethrown on the caller's thread after all workers stop.
 */
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body) {
  const std::size_t workers =
      std::min<std::size_t>(effective_threads(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) {
        return;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
      pool.emplace_back(work);
    }
    work();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

} // namespace ecc

#endif // ECC_PARALLEL_HPP_
