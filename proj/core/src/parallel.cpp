#include "skg/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace skg {

int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  long workers = hw ? static_cast<long>(hw) : 1;
  if (const char* env = std::getenv("SKG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) workers = std::min(v, 256L);
  }
  return static_cast<int>(std::max(workers, 1L));
}

void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures((n + chunk - 1) / chunk);
  pool.reserve(failures.size());
  for (std::size_t w = 0; w * chunk < n; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, &failures, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
}

}  // namespace skg
