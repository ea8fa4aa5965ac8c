#pragma once

#include <cstddef>
#include <functional>

namespace nct {

/// Runs task(i) for i in [0, n) on up to `threads` workers. Tasks are handed
/// out dynamically, so callers must keep results in per-task slots. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task);

}  // namespace nct
