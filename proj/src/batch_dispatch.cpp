#include <cstdlib>
#include <cstring>

#include "h14/batch.hpp"

namespace h14::batch {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "?";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() {
    const char* force = std::getenv("H14_FORCE_SCALAR");
    if (force && std::strcmp(force, "0") != 0 && *force) return Isa::scalar;
    if (isa_available(Isa::avx2)) return Isa::avx2;
    if (isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

void iterate(Isa isa, const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    switch (isa) {
        case Isa::avx2: iterate_avx2(spec, lanes, steps, radius); return;
        case Isa::neon: iterate_neon(spec, lanes, steps, radius); return;
        case Isa::scalar: break;
    }
    iterate_scalar(spec, lanes, steps, radius);
}

}  // namespace h14::batch
