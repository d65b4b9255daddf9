#pragma once

#include <cstddef>
#include <functional>

namespace mevolve {

/// Worker count from MEVOLVE_WORKERS, falling back to hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write
/// results into preallocated per-index slots so output order never depends on
/// scheduling. Nested calls from inside a worker run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mevolve
