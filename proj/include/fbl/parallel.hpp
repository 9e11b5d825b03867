#pragma once

// Data-parallel kernels used by the hot loops (grid scans, multi-start
// ascent, sign/partition enumeration, simplex pivots).  Each kernel has an
// OpenMP version and a serial reference version with identical semantics;
// the test suite compares them and tools/fbl_bench.cpp times them.
//
// Reductions are deterministic regardless of thread count: every index is
// evaluated by a pure callable and the merge is a lexicographic max over
// (value, -index), so ties resolve to the smallest index.

#include <cstddef>
#include <cstdint>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fbl {

struct IndexedMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = static_cast<std::size_t>(-1);
};

inline bool better(const IndexedMax& cur, double v, std::size_t i) {
  if (std::isnan(v)) return false;
  return v > cur.value || (v == cur.value && i < cur.index);
}

template <class F>
IndexedMax arg_max_serial(std::size_t count, F&& f) {
  IndexedMax best;
  for (std::size_t i = 0; i < count; ++i) {
    double v = f(i);
    if (better(best, v, i)) best = {v, i};
  }
  return best;
}

template <class F>
IndexedMax arg_max(std::size_t count, F&& f) {
#ifndef _OPENMP
  return arg_max_serial(count, f);
#else
  IndexedMax best;
#pragma omp parallel
  {
    IndexedMax local;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      double v = f(static_cast<std::size_t>(i));
      if (better(local, v, static_cast<std::size_t>(i))) {
        local = {v, static_cast<std::size_t>(i)};
      }
    }
#pragma omp critical(fbl_arg_max_merge)
    {
      if (local.index != static_cast<std::size_t>(-1) &&
          better(best, local.value, local.index)) {
        best = local;
      }
    }
  }
  return best;
#endif
}

template <class F>
void fill_table_serial(std::size_t count, double* out, F&& f) {
  for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
}

template <class F>
void fill_table(std::size_t count, double* out, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    out[i] = f(static_cast<std::size_t>(i));
  }
#else
  fill_table_serial(count, out, f);
#endif
}

inline int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_worker_cap(int n) {
#ifdef _OPENMP
  if (n >= 1) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Reads FBL_LAB_THREADS and caps the OpenMP worker pool accordingly.
void apply_worker_cap_from_env();

}  // namespace fbl
