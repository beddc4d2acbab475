#include "splashwave/threading.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace splashwave {

void configure_threads_from_env() {
    const char* cap = std::getenv("SPLASHWAVE_THREADS");
    if (cap == nullptr) return;
    try {
        int n = std::stoi(cap);
        if (n > 0) set_thread_count(n);
    } catch (const std::exception&) {
        // Malformed value: keep the runtime default.
    }
}

int active_thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace splashwave
