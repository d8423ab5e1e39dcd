#pragma once

#include <cstdint>

#ifdef ISOTHERMIC_HAVE_OPENMP
#include <omp.h>
#endif

namespace isothermic {

// Execution policy for the data-parallel kernels (spectral scans, samplewise
// permutability solves, per-quad verification sweeps). Serial is the
// reference path; Parallel runs the same loop body under OpenMP. Every kernel
// writes each index to its own slot, so both paths produce bit-identical
// results and outputs stay deterministic regardless of thread count.
enum class ExecPolicy { Serial, Parallel };

template <typename Fn>
void for_each_index(std::int64_t n, ExecPolicy policy, Fn&& fn) {
#ifdef ISOTHERMIC_HAVE_OPENMP
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#else
    (void)policy;
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace isothermic
