#pragma once

#include <cstddef>
#include <functional>

namespace nlclaw {

/// Worker count: NLCLAW_THREADS when it is a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(0..n-1) on at most `threads` workers (0: thread_budget()).
/// Each index writes only its own result slot, so output never depends on the
/// partitioning. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

} // namespace nlclaw
