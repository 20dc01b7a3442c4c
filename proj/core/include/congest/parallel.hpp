#pragma once

#include <cstddef>
#include <functional>

namespace congest {

// Worker count: CONGEST_THREADS when set to a positive integer, otherwise
// the hardware concurrency.
unsigned worker_count();

// Runs fn(0) .. fn(n-1) across worker threads. Each index is handled by
// exactly one worker; the first exception thrown is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace congest
