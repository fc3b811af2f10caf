#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace esrinet {

/// 0 means "use the hardware concurrency" (at least 1).
unsigned resolve_threads(unsigned requested) noexcept;

/// Calls fn(worker, index) for every index in [0, n), distributing indices
/// dynamically over `threads` workers. Worker ids are dense in [0, threads).
/// Results must be written to per-index slots; the first exception thrown by
/// any worker is rethrown after all workers have joined.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(0u, i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = next.fetch_add(1, std::memory_order_relaxed); i < n;
               i = next.fetch_add(1, std::memory_order_relaxed)) {
            fn(w, i);
          }
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n, std::memory_order_relaxed);
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Splits [0, n) into contiguous blocks of at least `grain` items and calls
/// fn(begin, end) for each block in parallel.
template <class Fn>
void parallel_blocks(std::size_t n, unsigned threads, std::size_t grain, Fn&& fn) {
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(threads * 4u, (n + grain - 1) / grain));
  const std::size_t size = (n + blocks - 1) / blocks;
  parallel_for(blocks, threads, [&](unsigned, std::size_t b) {
    const std::size_t begin = b * size;
    const std::size_t end = std::min(n, begin + size);
    if (begin < end) fn(begin, end);
  });
}

}  // namespace esrinet
