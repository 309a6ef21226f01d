#pragma once

#include <cstddef>
#include <functional>

namespace polyfreq {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers write results
/// by index, so the merged output does not depend on scheduling. The first
/// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace polyfreq
