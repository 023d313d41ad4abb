#include "randheston/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace randheston {

int thread_cap() {
    const int hw = omp_get_max_threads();
    if (const char* env = std::getenv("RANDHESTON_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n < hw ? n : hw;
        } catch (const std::exception&) {
        }
    }
    return hw;
}

}  // namespace randheston
