#pragma once

#include <cstdint>
#include <functional>

namespace forkrate {

// Parallelism cap: FORKRATE_THREADS when set (errc::config_error if it is not
// a positive integer), otherwise the hardware concurrency (at least 1).
int max_threads();

// Static partition of [0, n) into at most max_threads() contiguous chunks,
// each handed to body(begin, end) on its own thread. Exceptions from workers
// are rethrown on the calling thread. Safe only for bodies that write to
// disjoint state per index.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace forkrate
