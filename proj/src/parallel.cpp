#include "landau/parallel.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace landau {

void configure_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    const char *env = std::getenv("LANDAU_THREADS");
    if (!env)
      return;
    int cap = std::atoi(env);
#ifdef _OPENMP
    if (cap > 0)
      omp_set_num_threads(cap);
#else
    (void)cap;
#endif
  });
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace landau
