#pragma once

#include <cstddef>
#include <functional>

namespace constellation {

/// Worker count used by the library. Defaults to the CONSTELLATION_THREADS
/// environment variable, else 1.
int thread_count();
void set_thread_count(int n);

/// Runs body(chunk_begin, chunk_end, chunk_index) over [0, n) in fixed-size
/// chunks. Chunk boundaries do not depend on the thread count, so callers that
/// reduce per-chunk results in chunk order get bit-identical output for any
/// number of workers.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace constellation
