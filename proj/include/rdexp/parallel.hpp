#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rdexp {

// Runs fn(block_begin, block_end) over [0, total) split into fixed-size blocks.
// The block layout depends only on (total, block_size), never on the thread
// count, so any per-block state (warm starts) yields identical results for any
// number of threads. Blocks are claimed from an atomic counter; outputs must be
// written to disjoint, index-addressed slots by the caller.
inline void parallel_blocks(std::size_t total, std::size_t block_size, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  if (block_size == 0) block_size = 1;
  std::size_t n_blocks = (total + block_size - 1) / block_size;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (threads == 1 || n_blocks == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b)
      fn(b * block_size, std::min(total, (b + 1) * block_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        fn(b * block_size, std::min(total, (b + 1) * block_size));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned n = std::min<std::size_t>(threads, n_blocks);
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rdexp
