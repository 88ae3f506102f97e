#pragma once

#include <cstddef>
#include <functional>

namespace diffusia {

/// Worker cap: DIFFUSIA_THREADS when set (minimum 1), hardware concurrency
/// otherwise.
int thread_budget();

/**
 * Runs fn(0..n-1) across the thread budget with an atomic work counter.
 * Callers index into preallocated storage, so results are identical for any
 * schedule or thread count. Exceptions from fn are rethrown on the caller.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace diffusia
