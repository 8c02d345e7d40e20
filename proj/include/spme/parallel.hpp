#pragma once

#include <cstddef>
#include <functional>

namespace spme {

/// Number of worker threads to use when `requested` is 0 (hardware count).
unsigned resolve_threads(unsigned requested);

/// Run fn(i) for i in [0, n) on up to `threads` workers. Exceptions from
/// workers are captured and the first one rethrown after the join, so a
/// failing body cannot tear the pool down mid-flight.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

} // namespace spme
