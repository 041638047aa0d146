#include "entropy_lab/numerics/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace entropy_lab::numerics {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ENTROPY_LAB_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_blocks(std::size_t n_blocks, int threads,
                     const std::function<void(std::size_t)>& body) {
  if (n_blocks == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n_blocks, static_cast<std::size_t>(threads > 0 ? threads : 1));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_block = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t block = next.fetch_add(1);
      if (block >= n_blocks) return;
      try {
        body(block);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (block < error_block) {
          error_block = block;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace entropy_lab::numerics
