#pragma once

#include <cstddef>
#include <functional>

namespace volnet {

/// Worker count for parallel loops: the override from set_thread_count() if
/// non-zero, else `VOLNET_THREADS` if set, else hardware concurrency.
[[nodiscard]] std::size_t thread_count();

/// Process-wide override; 0 restores the environment/hardware default.
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) on up to thread_count() workers, in any order. The
/// body must only write to state owned by index i. The first exception thrown
/// by any iteration is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace volnet
