#pragma once

#include <cstddef>
#include <functional>

namespace skg {

// Worker cap: hardware concurrency, overridden by the SKG_THREADS environment
// variable when set to a positive integer. Re-read on every call so tests can
// flip it at runtime.
int worker_count();

// Runs fn(begin, end) over disjoint chunks of [0, n), possibly on several
// threads. Callers must only write disjoint state per index; there is no
// reduction here, so results are independent of the thread count. The first
// exception (lowest chunk) is rethrown after all workers join.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace skg
