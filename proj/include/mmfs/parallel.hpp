#pragma once

#include <cstddef>

#ifdef MMFS_HAVE_OPENMP
#include <omp.h>
#endif

namespace mmfs {

/// Execution mode for the data-parallel kernels (batch fitness evaluation,
/// Monte Carlo oracles). `serial` is the reference path; `openmp` must
/// produce identical results.
enum class ExecMode { serial, openmp };

/// Global cap on worker threads for the OpenMP kernels; 0 = runtime default.
void set_thread_cap(int threads);
int thread_cap();

/// Runs body(i) for i in [0, n). Bodies must be independent and write only
/// to their own slot of the output.
template <typename Body>
void parallel_for(std::size_t n, ExecMode mode, Body&& body) {
#ifdef MMFS_HAVE_OPENMP
    if (mode == ExecMode::openmp) {
        const int cap = thread_cap();
#pragma omp parallel for schedule(dynamic) num_threads(cap > 0 ? cap : omp_get_max_threads())
        for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace mmfs
