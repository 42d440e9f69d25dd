#include "becsim/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace becsim {

void parallel_for_blocks(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t n_workers =
      std::min<std::size_t>(std::max(threads, 1), count);
  if (n_workers <= 1) {
    body(0, count);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mtx;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);

  const std::size_t chunk = (count + n_workers - 1) / n_workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end]() {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mtx);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace becsim
