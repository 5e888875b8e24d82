#pragma once

#include <functional>

#include "enstro/grid.hpp"

namespace enstro {

/// Worker count for per-mode solves: hardware concurrency, capped by the
/// ENSTRO_THREADS environment variable when set.
Index solver_threads();

/// Calls body(i) for i in [0, n), split into contiguous chunks across
/// solver_threads() workers. Each index is touched by exactly one worker.
void parallel_for(Index n, const std::function<void(Index)>& body);

}  // namespace enstro
