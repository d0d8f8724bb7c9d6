#pragma once

#include <cstddef>
#include <functional>

namespace borno {

// Worker count used by the parallel kernels. Never changes results.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n), split into contiguous chunks across workers.
// Exceptions from workers are rethrown on the calling thread (first by index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace borno
