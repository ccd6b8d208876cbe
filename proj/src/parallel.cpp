#include "bootpls/parallel.h"

#include <atomic>

namespace bootpls {

namespace {
std::atomic<ExecPolicy> g_policy{ExecPolicy::OpenMp};
}

ExecPolicy default_policy() { return g_policy.load(); }

void set_default_policy(ExecPolicy policy) { g_policy.store(policy); }

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace bootpls
