#include <cmath>

#include "h14/batch.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace h14::batch {

namespace detail {
void check_lanes(const Lanes& lanes, int steps);
void scalar_lanes(const MapSpec& spec, const Lanes& lanes, std::size_t begin, std::size_t end, int steps,
                  double radius);
}  // namespace detail

#if defined(__aarch64__)

namespace {

void neon_block(const MapSpec& spec, const Lanes& lanes, std::size_t i, int steps, double radius) {
    const std::size_t stride = static_cast<std::size_t>(steps) + 1;
    const float64x2_t m1 = vdupq_n_f64(spec.m1);
    const float64x2_t m2 = vdupq_n_f64(spec.m2);
    const float64x2_t d = vdupq_n_f64(static_cast<double>(spec.delta));
    const float64x2_t r = vdupq_n_f64(radius);

    float64x2_t x = vld1q_f64(lanes.x0.data() + i);
    float64x2_t y = vld1q_f64(lanes.y0.data() + i);
    uint64x2_t frozen = vorrq_u64(vcgtq_f64(vabsq_f64(x), r), vcgtq_f64(vabsq_f64(y), r));
    int esc[2] = {vgetq_lane_u64(frozen, 0) ? 0 : -1, vgetq_lane_u64(frozen, 1) ? 0 : -1};

    auto store = [&](int k) {
        lanes.out_x[i * stride + k] = vgetq_lane_f64(x, 0);
        lanes.out_x[(i + 1) * stride + k] = vgetq_lane_f64(x, 1);
        lanes.out_y[i * stride + k] = vgetq_lane_f64(y, 0);
        lanes.out_y[(i + 1) * stride + k] = vgetq_lane_f64(y, 1);
    };
    store(0);
    for (int k = 1; k <= steps; ++k) {
        // separate mul/add (no vfma) to match the scalar rounding
        const float64x2_t y2 = vmulq_f64(y, y);
        const float64x2_t py = vsubq_f64(vaddq_f64(m1, vmulq_f64(m2, y)), vmulq_f64(d, vmulq_f64(y2, y)));
        const float64x2_t nx = y;
        const float64x2_t ny = vsubq_f64(py, x);
        const uint64x2_t out = vorrq_u64(vcgtq_f64(vabsq_f64(nx), r), vcgtq_f64(vabsq_f64(ny), r));
        if (vgetq_lane_u64(out, 0) && !vgetq_lane_u64(frozen, 0)) esc[0] = k;
        if (vgetq_lane_u64(out, 1) && !vgetq_lane_u64(frozen, 1)) esc[1] = k;
        frozen = vorrq_u64(frozen, out);
        x = vbslq_f64(frozen, x, nx);
        y = vbslq_f64(frozen, y, ny);
        store(k);
    }
    lanes.escape[i] = esc[0];
    lanes.escape[i + 1] = esc[1];
}

}  // namespace

void iterate_neon(const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    detail::check_lanes(lanes, steps);
    const std::size_t n = lanes.x0.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) neon_block(spec, lanes, i, steps, radius);
    detail::scalar_lanes(spec, lanes, i, n, steps, radius);
}

#else

void iterate_neon(const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    detail::check_lanes(lanes, steps);
    detail::scalar_lanes(spec, lanes, 0, lanes.x0.size(), steps, radius);
}

#endif

}  // namespace h14::batch
