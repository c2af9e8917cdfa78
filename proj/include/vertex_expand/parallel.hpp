#pragma once

#include <cstddef>
#include <functional>

namespace vertex_expand {

/// Number of worker threads used by internally parallel routines. Capped by
/// the VERTEX_EXPAND_THREADS environment variable; at least 1.
unsigned thread_count();

/// Runs `body(begin, end)` over contiguous blocks covering [0, n). Each index
/// is visited by exactly one call, so writes to per-index outputs are
/// independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace vertex_expand
