#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace blockspec {

/// Worker count: explicit value if given, else BLOCKSPEC_THREADS, else 1.
unsigned resolve_threads(std::optional<unsigned> requested = std::nullopt);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written by index; iteration order is unspecified. The first exception
/// thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace blockspec
