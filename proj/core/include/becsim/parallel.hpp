#pragma once

#include <cstddef>
#include <functional>

namespace becsim {

/// Partitions [0, count) into contiguous blocks and runs body(begin, end)
/// on up to `threads` std::threads. Callers must write results to disjoint
/// preallocated slots so the output is identical to a sequential run.
/// threads <= 1 runs inline. The first exception thrown by any block is
/// rethrown on the calling thread after all workers join.
void parallel_for_blocks(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace becsim
