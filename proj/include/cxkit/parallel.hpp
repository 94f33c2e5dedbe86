#pragma once

#include <cstddef>
#include <functional>

namespace cxkit {

/// Worker count: `requested` (0 = hardware concurrency), capped by the
/// CXKIT_THREADS environment variable when it is set.
unsigned thread_count(unsigned requested = 0);

/// Calls f(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; callers write results into slot i, so output order never
/// depends on the schedule. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace cxkit
