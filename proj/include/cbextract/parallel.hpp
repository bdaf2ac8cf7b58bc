#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cbx {

/// Worker count for a parallel region: 0 means the OpenMP runtime default.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cbx
