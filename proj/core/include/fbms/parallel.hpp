#pragma once

#include <cstddef>
#include <functional>

namespace fbms {

/// Worker count: FBMS_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_threads();

/// Calls body(i) for every i in [0, n). Each index is handled exactly once;
/// callers write results into per-index slots so the outcome does not depend
/// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Splits [0, n) into `chunks` contiguous ranges of near-equal size. The split
/// depends only on n and chunks, never on the thread count.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
};
ChunkRange chunk_range(std::size_t n, std::size_t chunks, std::size_t index);

}  // namespace fbms
