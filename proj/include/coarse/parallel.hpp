#pragma once

#include <cstddef>
#include <functional>

namespace coarse {

// Worker count taken from COARSE_LAB_THREADS (default 1).
unsigned thread_count();

// Calls body(i) for i in [0,n) across thread_count() workers. body must only
// write state owned by index i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace coarse
