// AVX2 variants, 4 doubles per vector. Compiled with -mavx2 only; this file
// must not pull in inline library code that could leak AVX2 instructions into
// other translation units.

#include <immintrin.h>

#include "xbar/kernels.hpp"

namespace xbar::kernels {
namespace {

void effective_ratio(const double* k, const double* r_on, const double* series, double* k_eff, std::size_t count) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d vk = _mm256_loadu_pd(k + i);
        __m256d vr = _mm256_loadu_pd(r_on + i);
        __m256d vs = _mm256_loadu_pd(series + i);
        __m256d denom = _mm256_add_pd(one, _mm256_div_pd(vs, vr));
        __m256d out = _mm256_add_pd(_mm256_div_pd(_mm256_sub_pd(vk, one), denom), one);
        _mm256_storeu_pd(k_eff + i, out);
    }
    if (i < count) detail::scalar_table.effective_ratio(k + i, r_on + i, series + i, k_eff + i, count - i);
}

void accumulate_rows(const double* g, std::size_t n_cols, const std::size_t* rows, std::size_t n_rows, double* acc) {
    for (std::size_t i = 0; i < n_rows; ++i) {
        const double* row = g + rows[i] * n_cols;
        std::size_t c = 0;
        for (; c + 4 <= n_cols; c += 4) {
            __m256d a = _mm256_loadu_pd(acc + c);
            _mm256_storeu_pd(acc + c, _mm256_add_pd(a, _mm256_loadu_pd(row + c)));
        }
        for (; c < n_cols; ++c) acc[c] += row[c];
    }
}

void ladder_lanes4(const LadderBatch& b, std::size_t l) {
    const std::size_t L = b.lanes;
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d v = _mm256_loadu_pd(b.v_drive + l);
    const __m256d r = _mm256_loadu_pd(b.r_line + l);

    __m256d G = _mm256_loadu_pd(b.g + l);
    for (std::size_t k = 1; k < b.n; ++k) {
        __m256d s = _mm256_div_pd(G, _mm256_add_pd(one, _mm256_mul_pd(r, G)));
        _mm256_storeu_pd(b.scratch + (k - 1) * L + l, s);
        G = _mm256_add_pd(s, _mm256_loadu_pd(b.g + k * L + l));
    }
    _mm256_storeu_pd(b.i_sl + l, _mm256_mul_pd(G, v));

    const std::size_t last = (b.n - 1) * L + l;
    __m256d v_next = _mm256_setzero_pd();
    _mm256_storeu_pd(b.v_node + last, v_next);
    _mm256_storeu_pd(b.i_branch + last, _mm256_mul_pd(_mm256_loadu_pd(b.g + last), v));
    for (std::size_t k = b.n - 1; k-- > 0;) {
        const std::size_t at = k * L + l;
        __m256d j = _mm256_mul_pd(_mm256_loadu_pd(b.scratch + at), _mm256_sub_pd(v, v_next));
        __m256d vk = _mm256_add_pd(v_next, _mm256_mul_pd(r, j));
        _mm256_storeu_pd(b.v_node + at, vk);
        _mm256_storeu_pd(b.i_branch + at, _mm256_mul_pd(_mm256_loadu_pd(b.g + at), _mm256_sub_pd(v, vk)));
        v_next = vk;
    }
}

void ladder_solve(const LadderBatch& b) {
    std::size_t l = 0;
    for (; l + 4 <= b.lanes; l += 4) ladder_lanes4(b, l);
    for (; l < b.lanes; ++l) detail::ladder_lane(b, l);
}

}  // namespace

namespace detail {
const KernelTable avx2_table{&effective_ratio, &accumulate_rows, &ladder_solve};
}

}  // namespace xbar::kernels
