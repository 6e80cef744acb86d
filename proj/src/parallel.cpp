#include "grafl/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

#include "grafl/error.hpp"

namespace grafl {

int resolve_workers(int requested) {
    if (const char* env = std::getenv("GRAFL_WORKERS"); env && *env) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("GRAFL_WORKERS must be a positive integer, got '") + env + "'");
    }
    if (requested > 0) return requested;
    return omp_get_max_threads();
}

}  // namespace grafl
