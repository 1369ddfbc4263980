#pragma once

#include <span>
#include <string_view>

#include "h14/maps.hpp"

namespace h14::batch {

// Iterates many seeds at once in structure-of-arrays layout.
//
// Lane i starts at (x0[i], y0[i]). Its trajectory is written to
// out_x/out_y at [i * (steps + 1) + k] for k = 0..steps. escape[i] is -1 for
// bounded lanes, else the first step whose point left the box
// |x|, |y| <= radius; from that step on the lane stays frozen at its last
// inside point.
struct Lanes {
    std::span<const double> x0;
    std::span<const double> y0;
    std::span<double> out_x;
    std::span<double> out_y;
    std::span<int> escape;
};

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

void iterate_scalar(const MapSpec& spec, const Lanes& lanes, int steps, double radius);
void iterate_avx2(const MapSpec& spec, const Lanes& lanes, int steps, double radius);
void iterate_neon(const MapSpec& spec, const Lanes& lanes, int steps, double radius);

bool isa_available(Isa isa);
// Best ISA supported by this CPU; H14_FORCE_SCALAR=1 in the environment pins scalar.
Isa detect_isa();

void iterate(Isa isa, const MapSpec& spec, const Lanes& lanes, int steps, double radius);
inline void iterate(const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    iterate(detect_isa(), spec, lanes, steps, radius);
}

}  // namespace h14::batch
