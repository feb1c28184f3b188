#pragma once

#include <cstddef>
#include <functional>

namespace dilatrix {

/// Number of worker threads used by parallel_for. hardware_concurrency
/// capped by the DILATRIX_THREADS environment variable.
std::size_t thread_budget();

/// Run fn(i) for i in [0, n). Work items must be independent; results keyed
/// by i so merging is deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dilatrix
