#pragma once

#include <cstddef>
#include <functional>

namespace tubenet {

/// Worker count: TUBENET_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Splits [0, n) into contiguous chunks, one per worker. Chunk boundaries
/// depend only on n and the worker count, so per-chunk results merged in
/// chunk order are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace tubenet
