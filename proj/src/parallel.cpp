#include "orderlab/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orderlab {

int worker_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("ORDERLAB_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (...) {
            // unparsable cap: keep the OpenMP default
        }
    }
    return n;
#else
    return 1;
#endif
}

bool use_parallel(Parallelism mode) {
    switch (mode) {
        case Parallelism::Serial: return false;
        case Parallelism::Parallel: return true;
        case Parallelism::Auto: return worker_count() > 1;
    }
    return false;
}

} // namespace orderlab
