#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants.
//
// Every variant performs the same IEEE operations in the same order for each
// element (no FMA contraction, no reassociation), so results are bit-identical
// across ISAs. The equivalence tests rely on that.
//
// Dispatch picks the widest ISA the CPU supports at first use. Setting the
// environment variable XBAR_SIMD=scalar|avx2|neon before the first call
// overrides the choice (an unavailable ISA falls back to scalar).

#include <cstddef>
#include <string_view>

namespace xbar::kernels {

enum class Isa { Scalar, Avx2, Neon };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;
/// True when the variant is compiled in and the running CPU supports it.
[[nodiscard]] bool isa_available(Isa isa) noexcept;
[[nodiscard]] Isa active_isa() noexcept;

/// Lane-interleaved ladder batch: `lanes` independent channels of equal
/// length `n`, element (row k, lane l) stored at [k * lanes + l].
struct LadderBatch {
    std::size_t n = 0;
    std::size_t lanes = 0;
    const double* g = nullptr;       ///< branch conductance to the drive rail, n * lanes
    const double* v_drive = nullptr; ///< lanes
    const double* r_line = nullptr;  ///< lanes, unit segment resistance (> 0)
    double* scratch = nullptr;       ///< n * lanes
    double* v_node = nullptr;        ///< n * lanes, out
    double* i_branch = nullptr;      ///< n * lanes, out
    double* i_sl = nullptr;          ///< lanes, out
};

struct KernelTable {
    /// k_eff[i] = (k[i] - 1) / (1 + series[i] / r_on[i]) + 1
    void (*effective_ratio)(const double* k, const double* r_on, const double* series, double* k_eff,
                            std::size_t count);
    /// acc[c] += g[row * n_cols + c] for each listed row, rows taken in order.
    void (*accumulate_rows)(const double* g, std::size_t n_cols, const std::size_t* rows, std::size_t n_rows,
                            double* acc);
    /// Ladder elimination toward the sense node, then back-substitution.
    void (*ladder_solve)(const LadderBatch& batch);
};

[[nodiscard]] const KernelTable& table(Isa isa);
[[nodiscard]] const KernelTable& dispatch();

namespace detail {
extern const KernelTable scalar_table;
/// Scalar ladder solve of a single lane; SIMD variants use it for tail lanes.
void ladder_lane(const LadderBatch& batch, std::size_t lane);
#if defined(XBAR_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(XBAR_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace xbar::kernels
