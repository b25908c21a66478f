#pragma once

#include <cstddef>
#include <functional>

namespace tdg {

/// Worker count: TDG_THREADS if set (>= 1), otherwise the hardware
/// concurrency.  Set to 1 for the single-threaded reference path.
int worker_count();

/// Calls body(i) for i in [0, n).  Each index is visited exactly once; the
/// caller writes results into per-index slots and merges them in index
/// order afterwards, so the outcome does not depend on the worker count.
/// The first exception thrown by a worker is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tdg
