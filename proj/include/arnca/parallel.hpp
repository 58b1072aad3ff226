#pragma once

#include <functional>

namespace arnca {

/// Worker cap: ARNCA_THREADS when set (min 1), else hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads with a static
/// block partition. Callers keep outputs in per-index slots, so results do
/// not depend on the worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace arnca
