// AArch64 NEON variants, 2 doubles per vector.

#include <arm_neon.h>

#include "xbar/kernels.hpp"

namespace xbar::kernels {
namespace {

void effective_ratio(const double* k, const double* r_on, const double* series, double* k_eff, std::size_t count) {
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        float64x2_t denom = vaddq_f64(one, vdivq_f64(vld1q_f64(series + i), vld1q_f64(r_on + i)));
        float64x2_t out = vaddq_f64(vdivq_f64(vsubq_f64(vld1q_f64(k + i), one), denom), one);
        vst1q_f64(k_eff + i, out);
    }
    if (i < count) detail::scalar_table.effective_ratio(k + i, r_on + i, series + i, k_eff + i, count - i);
}

void accumulate_rows(const double* g, std::size_t n_cols, const std::size_t* rows, std::size_t n_rows, double* acc) {
    for (std::size_t i = 0; i < n_rows; ++i) {
        const double* row = g + rows[i] * n_cols;
        std::size_t c = 0;
        for (; c + 2 <= n_cols; c += 2) vst1q_f64(acc + c, vaddq_f64(vld1q_f64(acc + c), vld1q_f64(row + c)));
        for (; c < n_cols; ++c) acc[c] += row[c];
    }
}

void ladder_lanes2(const LadderBatch& b, std::size_t l) {
    const std::size_t L = b.lanes;
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t v = vld1q_f64(b.v_drive + l);
    const float64x2_t r = vld1q_f64(b.r_line + l);

    float64x2_t G = vld1q_f64(b.g + l);
    for (std::size_t k = 1; k < b.n; ++k) {
        // vmulq/vaddq kept separate: vfmaq would change rounding.
        float64x2_t s = vdivq_f64(G, vaddq_f64(one, vmulq_f64(r, G)));
        vst1q_f64(b.scratch + (k - 1) * L + l, s);
        G = vaddq_f64(s, vld1q_f64(b.g + k * L + l));
    }
    vst1q_f64(b.i_sl + l, vmulq_f64(G, v));

    const std::size_t last = (b.n - 1) * L + l;
    float64x2_t v_next = vdupq_n_f64(0.0);
    vst1q_f64(b.v_node + last, v_next);
    vst1q_f64(b.i_branch + last, vmulq_f64(vld1q_f64(b.g + last), v));
    for (std::size_t k = b.n - 1; k-- > 0;) {
        const std::size_t at = k * L + l;
        float64x2_t j = vmulq_f64(vld1q_f64(b.scratch + at), vsubq_f64(v, v_next));
        float64x2_t vk = vaddq_f64(v_next, vmulq_f64(r, j));
        vst1q_f64(b.v_node + at, vk);
        vst1q_f64(b.i_branch + at, vmulq_f64(vld1q_f64(b.g + at), vsubq_f64(v, vk)));
        v_next = vk;
    }
}

void ladder_solve(const LadderBatch& b) {
    std::size_t l = 0;
    for (; l + 2 <= b.lanes; l += 2) ladder_lanes2(b, l);
    for (; l < b.lanes; ++l) detail::ladder_lane(b, l);
}

}  // namespace

namespace detail {
const KernelTable neon_table{&effective_ratio, &accumulate_rows, &ladder_solve};
}

}  // namespace xbar::kernels
