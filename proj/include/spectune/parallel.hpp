#pragma once

#include <functional>

namespace spectune {

/// Worker thread cap: SPECWEAVE_THREADS if set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
int thread_budget();

/// Runs fn(i) for i in [0, count) on up to `threads` threads. Exceptions
/// from workers are rethrown on the calling thread (first one wins).
void parallel_for(int count, const std::function<void(int)>& fn, int threads);

}  // namespace spectune
