#include <cmath>
#include <stdexcept>

#include "h14/batch.hpp"

namespace h14::batch {

namespace detail {

void check_lanes(const Lanes& lanes, int steps) {
    const std::size_t n = lanes.x0.size();
    const std::size_t need = n * static_cast<std::size_t>(steps + 1);
    if (steps < 0 || lanes.y0.size() != n || lanes.escape.size() != n || lanes.out_x.size() < need ||
        lanes.out_y.size() < need)
        throw std::invalid_argument("batch::iterate: inconsistent lane buffers");
}

// Reference lane update; the SIMD kernels reproduce these operations in the
// same order so results are bit-identical.
void scalar_lanes(const MapSpec& spec, const Lanes& lanes, std::size_t begin, std::size_t end, int steps,
                  double radius) {
    const double d = spec.delta;
    const std::size_t stride = static_cast<std::size_t>(steps) + 1;
    for (std::size_t i = begin; i < end; ++i) {
        double x = lanes.x0[i];
        double y = lanes.y0[i];
        int esc = (std::fabs(x) > radius || std::fabs(y) > radius) ? 0 : -1;
        double* ox = lanes.out_x.data() + i * stride;
        double* oy = lanes.out_y.data() + i * stride;
        ox[0] = x;
        oy[0] = y;
        for (int k = 1; k <= steps; ++k) {
            if (esc < 0) {
                const double y2 = y * y;
                const double py = spec.m1 + spec.m2 * y - d * (y2 * y);
                const double nx = y;
                const double ny = py - x;
                if (std::fabs(nx) > radius || std::fabs(ny) > radius) {
                    esc = k;
                } else {
                    x = nx;
                    y = ny;
                }
            }
            ox[k] = x;
            oy[k] = y;
        }
        lanes.escape[i] = esc;
    }
}

}  // namespace detail

void iterate_scalar(const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    detail::check_lanes(lanes, steps);
    detail::scalar_lanes(spec, lanes, 0, lanes.x0.size(), steps, radius);
}

}  // namespace h14::batch
