#include "vertiflow/par/kernels.hpp"

#include <atomic>

namespace vertiflow::par {

namespace {
std::atomic<int> g_threads{0};  // 0 = runtime default
}

int set_threads(int n) {
  if (n < 0) n = 0;
  return g_threads.exchange(n);
}

int threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace vertiflow::par
