#pragma once

#include <cstddef>
#include <functional>

namespace pu {

// Worker count used by parallel_for. Resolution order: explicit
// set_worker_count, PU_WORKERS env var, hardware concurrency.
int worker_count();
void set_worker_count(int n);

// Runs fn(i) for i in [0, n) across worker threads in contiguous blocks.
// Callers must write results into per-index slots; any reduction happens
// after the join so output is independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace pu
