#pragma once
// Small parallel-loop kernels (OpenMP when available) with serial reference
// implementations kept side by side for testing.
//
// Contract: results are identical between the serial and parallel variants.
// for_each_index guarantees this when iterations write disjoint state;
// min_reduce guarantees it unconditionally because every index is evaluated
// and merges use exact comparison with lowest-index tie-breaks.

#include <cstdint>
#include <utility>
#include <vector>

#include "vertiflow/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vertiflow::par {

// Number of worker threads used by the parallel variants.  0 = runtime
// default.  Returns the previous setting.
int set_threads(int n);
int threads();  // resolved thread count (>= 1)

// Serial reference: plain ascending loop.
template <class F>
void for_each_index_serial(std::int64_t n, F&& fn) {
  for (std::int64_t i = 0; i < n; ++i) fn(i);
}

// Parallel loop over [0, n).  Iterations must write disjoint state.
template <class F>
void for_each_index(std::int64_t n, F&& fn) {
#ifdef _OPENMP
  if (threads() > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(threads())
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
#endif
  for_each_index_serial(n, fn);
}

// Serial reference for the ordered min-reduction.
template <class F>
std::pair<double, std::int64_t> min_reduce_serial(std::int64_t n, F&& value_fn) {
  double best = kInf;
  std::int64_t best_idx = -1;
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = value_fn(i);
    if (v < best) {
      best = v;
      best_idx = i;
    }
  }
  return {best, best_idx};
}

// Chunked min-reduction over [0, n): returns (min value, lowest index
// attaining it).  Every index is evaluated, chunk-local minima use strict
// comparison, and chunks merge in ascending order, so the result is bitwise
// identical to min_reduce_serial for any thread count.
template <class F>
std::pair<double, std::int64_t> min_reduce(std::int64_t n, F&& value_fn) {
#ifdef _OPENMP
  const int nt = threads();
  if (nt > 1 && n > 1) {
    std::vector<std::pair<double, std::int64_t>> local(
        static_cast<std::size_t>(nt), {kInf, -1});
#pragma omp parallel num_threads(nt)
    {
      const int tid = omp_get_thread_num();
      double best = kInf;
      std::int64_t best_idx = -1;
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) {
        const double v = value_fn(i);
        if (v < best) {
          best = v;
          best_idx = i;
        }
      }
      local[static_cast<std::size_t>(tid)] = {best, best_idx};
    }
    // Static scheduling hands each thread one ascending contiguous block, so
    // merging by ascending index keeps the lowest-index tie-break exact.
    double best = kInf;
    std::int64_t best_idx = -1;
    for (const auto& [v, idx] : local) {
      if (idx < 0) continue;
      if (v < best || (v == best && idx < best_idx)) {
        best = v;
        best_idx = idx;
      }
    }
    return {best, best_idx};
  }
#endif
  return min_reduce_serial(n, value_fn);
}

}  // namespace vertiflow::par
