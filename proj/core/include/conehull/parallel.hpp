#pragma once

#include <cstddef>
#include <functional>

namespace conehull {

// Effective worker count: min(hardware, CONEHULL_THREADS if set, n).
// CONEHULL_THREADS=1 forces sequential execution.
std::size_t thread_cap(std::size_t n);

// Runs fn(i) for i in [0, n). Results must be written to disjoint slots;
// the partition of indices is by slot, not by arrival order, so outputs are
// identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace conehull
