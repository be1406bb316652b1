#pragma once

#include <cstddef>
#include <functional>

namespace sevstack {

/// Runs fn(0) ... fn(count - 1) on up to `threads` workers (0 = hardware
/// concurrency). Results must not depend on scheduling; if several calls
/// throw, the exception of the lowest index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t threads = 0);

}  // namespace sevstack
