#ifndef MINIMAX_PARALLEL_HPP_
#define MINIMAX_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace minimax {

/// Worker count from MINIMAX_WORKERS, else 1.
inline unsigned default_workers() {
  if (const char* env = std::getenv("MINIMAX_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Calls body(begin, end) on contiguous chunks of [0, count). Each index is
/// visited exactly once; results written to per-index slots are therefore
/// identical for any worker count. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, count);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < chunks; ++w) {
    const std::size_t begin = count * w / chunks;
    const std::size_t end = count * (w + 1) / chunks;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace minimax

#endif  // MINIMAX_PARALLEL_HPP_
