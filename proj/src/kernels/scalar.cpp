// Reference implementations. SIMD variants must match these bit for bit.

#include "xbar/kernels.hpp"

namespace xbar::kernels {
namespace {

void effective_ratio(const double* k, const double* r_on, const double* series, double* k_eff, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) k_eff[i] = (k[i] - 1.0) / (1.0 + series[i] / r_on[i]) + 1.0;
}

void accumulate_rows(const double* g, std::size_t n_cols, const std::size_t* rows, std::size_t n_rows, double* acc) {
    for (std::size_t i = 0; i < n_rows; ++i) {
        const double* row = g + rows[i] * n_cols;
        for (std::size_t c = 0; c < n_cols; ++c) acc[c] += row[c];
    }
}

void ladder_solve(const LadderBatch& b) {
    for (std::size_t l = 0; l < b.lanes; ++l) detail::ladder_lane(b, l);
}

}  // namespace

namespace detail {

void ladder_lane(const LadderBatch& b, std::size_t l) {
    const std::size_t L = b.lanes;
    const double v = b.v_drive[l];
    const double r = b.r_line[l];

    // Fold rows 0..k-1 plus segment k-1 -> k into one conductance seen from node k.
    double G = b.g[l];
    for (std::size_t k = 1; k < b.n; ++k) {
        double s = G / (1.0 + r * G);
        b.scratch[(k - 1) * L + l] = s;
        G = s + b.g[k * L + l];
    }
    b.i_sl[l] = G * v;

    const std::size_t last = (b.n - 1) * L + l;
    b.v_node[last] = 0.0;
    b.i_branch[last] = b.g[last] * v;
    for (std::size_t k = b.n - 1; k-- > 0;) {
        const std::size_t at = k * L + l;
        double j = b.scratch[at] * (v - b.v_node[at + L]);
        b.v_node[at] = b.v_node[at + L] + r * j;
        b.i_branch[at] = b.g[at] * (v - b.v_node[at]);
    }
}

const KernelTable scalar_table{&effective_ratio, &accumulate_rows, &ladder_solve};
}

}  // namespace xbar::kernels
