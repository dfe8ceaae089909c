#pragma once

#include <cstddef>
#include <functional>

namespace fsw {

/// Number of worker threads: hardware concurrency, capped by the FSW_THREADS
/// environment variable when set.
std::size_t thread_budget();

/// Runs fn(begin, end) over a static partition of [0, count). Workers write
/// to disjoint slots, so results are value-identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace fsw
