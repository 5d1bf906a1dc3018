#include "arise/threading.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arise {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 0); }

int effective_threads(int requested) {
    if (requested > 0) return requested;
    int cap = g_max_threads.load();
    if (cap > 0) return cap;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace arise
