#pragma once

#include <cstddef>
#include <functional>

namespace stochorder {

// Worker count from STOCHORDER_THREADS (0 or unset = hardware concurrency).
unsigned thread_count();

// Calls body(i) for i in [0, n), partitioned over thread_count() workers.
// body must only write to slots owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stochorder
