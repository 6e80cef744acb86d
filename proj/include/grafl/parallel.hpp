#pragma once

#include <cstddef>
#include <cstdint>

namespace grafl {

/// Resolves a worker-count hint. `GRAFL_WORKERS` in the environment takes
/// precedence over `requested`; 0 means "use the OpenMP default".
int resolve_workers(int requested);

/// Runs body(i) for i in [0, count) across `workers` threads with a static
/// schedule. Each index is visited exactly once; callers write disjoint output.
template <typename Body>
void parallel_for(std::int64_t count, int workers, Body&& body) {
#pragma omp parallel for schedule(static) num_threads(workers > 0 ? workers : 1) if (workers > 1)
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

/// Dynamic-schedule variant for uneven per-index work.
template <typename Body>
void parallel_for_dynamic(std::int64_t count, int workers, Body&& body) {
#pragma omp parallel for schedule(dynamic, 64) num_threads(workers > 0 ? workers : 1) if (workers > 1)
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

}  // namespace grafl
