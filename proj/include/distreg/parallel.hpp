#pragma once

#include <cstddef>
#include <functional>

namespace distreg {

// Worker count currently in effect. Defaults to the hardware concurrency and
// can be overridden by the DISTREG_THREADS environment variable (read once)
// or by set_max_threads().
int max_threads();

// n >= 1 fixes the count; n == 0 restores the hardware default.
void set_max_threads(int n);

// Runs fn(i) for every i in [0, count). Iterations are distributed over
// worker threads; fn must only write state owned by index i, which keeps the
// results identical for every thread count. Nested calls degrade to serial
// execution. The first exception thrown by fn is rethrown to the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace distreg
