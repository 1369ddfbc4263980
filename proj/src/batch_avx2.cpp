#include <cmath>

#include "h14/batch.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define H14_HAVE_X86 1
#endif

namespace h14::batch {

namespace detail {
void check_lanes(const Lanes& lanes, int steps);
void scalar_lanes(const MapSpec& spec, const Lanes& lanes, std::size_t begin, std::size_t end, int steps,
                  double radius);
}  // namespace detail

#ifdef H14_HAVE_X86

namespace {

__attribute__((target("avx2"))) inline void store_step(const Lanes& lanes, std::size_t i, std::size_t stride, int k,
                                                         __m256d x, __m256d y) {
    alignas(32) double bx[4];
    alignas(32) double by[4];
    _mm256_store_pd(bx, x);
    _mm256_store_pd(by, y);
    for (int l = 0; l < 4; ++l) {
        lanes.out_x[(i + l) * stride + k] = bx[l];
        lanes.out_y[(i + l) * stride + k] = by[l];
    }
}

// No FMA here: contraction would change rounding relative to the scalar kernel.
__attribute__((target("avx2"))) void avx2_block(const MapSpec& spec, const Lanes& lanes, std::size_t i,
                                                  int steps, double radius) {
    const std::size_t stride = static_cast<std::size_t>(steps) + 1;
    const __m256d m1 = _mm256_set1_pd(spec.m1);
    const __m256d m2 = _mm256_set1_pd(spec.m2);
    const __m256d d = _mm256_set1_pd(static_cast<double>(spec.delta));
    const __m256d r = _mm256_set1_pd(radius);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    __m256d x = _mm256_loadu_pd(lanes.x0.data() + i);
    __m256d y = _mm256_loadu_pd(lanes.y0.data() + i);
    __m256d out0 = _mm256_or_pd(_mm256_cmp_pd(_mm256_and_pd(x, absmask), r, _CMP_GT_OQ),
                                _mm256_cmp_pd(_mm256_and_pd(y, absmask), r, _CMP_GT_OQ));
    int esc[4];
    const int init_mask = _mm256_movemask_pd(out0);
    for (int l = 0; l < 4; ++l) esc[l] = (init_mask >> l) & 1 ? 0 : -1;
    __m256d frozen = out0;

    store_step(lanes, i, stride, 0, x, y);
    for (int k = 1; k <= steps; ++k) {
        const __m256d y2 = _mm256_mul_pd(y, y);
        const __m256d py = _mm256_sub_pd(_mm256_add_pd(m1, _mm256_mul_pd(m2, y)), _mm256_mul_pd(d, _mm256_mul_pd(y2, y)));
        const __m256d nx = y;
        const __m256d ny = _mm256_sub_pd(py, x);
        const __m256d out = _mm256_or_pd(_mm256_cmp_pd(_mm256_and_pd(nx, absmask), r, _CMP_GT_OQ),
                                         _mm256_cmp_pd(_mm256_and_pd(ny, absmask), r, _CMP_GT_OQ));
        const __m256d newly = _mm256_andnot_pd(frozen, out);
        const int newly_mask = _mm256_movemask_pd(newly);
        if (newly_mask) {
            for (int l = 0; l < 4; ++l)
                if ((newly_mask >> l) & 1) esc[l] = k;
        }
        frozen = _mm256_or_pd(frozen, out);
        x = _mm256_blendv_pd(nx, x, frozen);
        y = _mm256_blendv_pd(ny, y, frozen);
        store_step(lanes, i, stride, k, x, y);
    }
    for (int l = 0; l < 4; ++l) lanes.escape[i + l] = esc[l];
}

}  // namespace

void iterate_avx2(const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    detail::check_lanes(lanes, steps);
    if (!isa_available(Isa::avx2)) {
        detail::scalar_lanes(spec, lanes, 0, lanes.x0.size(), steps, radius);
        return;
    }
    const std::size_t n = lanes.x0.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) avx2_block(spec, lanes, i, steps, radius);
    detail::scalar_lanes(spec, lanes, i, n, steps, radius);
}

#else

void iterate_avx2(const MapSpec& spec, const Lanes& lanes, int steps, double radius) {
    detail::check_lanes(lanes, steps);
    detail::scalar_lanes(spec, lanes, 0, lanes.x0.size(), steps, radius);
}

#endif

}  // namespace h14::batch
