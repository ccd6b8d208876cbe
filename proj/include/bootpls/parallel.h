#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bootpls {

/// Serial is the reference path; OpenMp must produce bit-identical results
/// because every task writes only to its own index.
enum class ExecPolicy { Serial, OpenMp };

ExecPolicy default_policy();
void set_default_policy(ExecPolicy policy);
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count). Nested calls inside an active parallel
/// region run serially.
template <class Body>
void parallel_for(std::size_t count, Body&& body, ExecPolicy policy = default_policy()) {
#ifdef _OPENMP
  if (policy == ExecPolicy::OpenMp && count > 1 && !omp_in_parallel()) {
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace bootpls
