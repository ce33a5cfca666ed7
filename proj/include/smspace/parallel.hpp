#pragma once

#include <cstddef>
#include <functional>

namespace smspace {

/// Run body(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots; the schedule never affects them. If any call
/// throws, the exception from the lowest index is rethrown after all workers
/// finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)> &body);

}  // namespace smspace
