#pragma once

#include <cstddef>
#include <functional>

namespace tabpred {

// Process-wide worker count used by parallel_for when the caller does not
// pass one. Defaults to 1 so runs are predictable unless asked otherwise.
unsigned default_thread_count();
void set_default_thread_count(unsigned n);

// Runs fn(i) for every i in [0, count). Indices are partitioned statically
// into contiguous ranges, one per worker, so the set of calls and everything
// each call computes is independent of the thread count. fn must only write
// to per-index state. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

} // namespace tabpred
