#pragma once

// Nodal solver for one routing channel.
//
// Row k (0-based) is a branch from the read-voltage rail to source-line node k
// with series resistance (k+1) r + R_cell(k) + R_fet(k), where R_fet is R_T for
// an active row and the calibrated off-resistance otherwise. Adjacent
// source-line nodes are joined by r; node n-1 is the sense terminal, held at
// virtual ground. A single branch therefore always sees (k+1) r + (n-1-k) r =
// n r of line, matching the closed-form model.

#include <cstdint>
#include <span>
#include <vector>

#include "xbar/types.hpp"

namespace xbar {

struct ChannelInstance {
    ChannelConfig cfg;
    std::vector<CellState> cell_state;
    /// Input pulse present on the row (FET gate driven).
    std::vector<std::uint8_t> row_active;
    /// Optional per-row cell resistance; empty means nominal r_on / r_off.
    std::vector<double> cell_resistance;

    /// All rows off and inactive.
    [[nodiscard]] static ChannelInstance idle(const ChannelConfig& cfg);

    [[nodiscard]] double cell_r(std::size_t row) const {
        return cell_resistance.empty() ? cfg.device.resistance(cell_state[row]) : cell_resistance[row];
    }
    /// Conductance of each row's branch to the drive rail (0 for an open branch).
    [[nodiscard]] std::vector<double> branch_conductances() const;

    /// Throws InvalidArgument on a bad config or mismatched vector lengths.
    void validate() const;
};

/// O(n) ladder elimination. With r_line = 0 the branches decouple and their
/// currents are summed directly.
[[nodiscard]] ChannelSolution solve_channel(const ChannelInstance& inst);

/// Solves many independent instances; instances of equal length are solved in
/// lockstep by the dispatched SIMD kernel. Output order matches input order
/// and each result is bit-identical to solve_channel on the same instance.
[[nodiscard]] std::vector<ChannelSolution> solve_channels(std::span<const ChannelInstance> insts);

struct FetLeakCalibration {
    double i_leak_per_fet = 0.0;
    /// v_read / i_leak_per_fet; +inf when leakage is disabled.
    double r_fet_off = 0.0;
};

/// Splits a measured per-channel leakage total evenly over its FETs. A zero
/// total disables leakage.
[[nodiscard]] FetLeakCalibration calibrate_fet_leak(double total_leak, std::size_t n_fets, double v_read);

enum class LeakPlacement { Even, Random };

struct LeakReport {
    double i_cc_leak = 0.0;     ///< channel current with n_si active off-rows
    double i_off_single = 0.0;  ///< same with a single active off-row
    double ratio = 0.0;
    /// Portion of i_cc_leak carried by the active rows' cells, and by idle FETs.
    double i_cells = 0.0;
    double i_fets = 0.0;
};

/// Active rows for i_cc_leak: evenly spaced floor((k + 0.5) n / n_si), or a
/// seeded random subset.
[[nodiscard]] std::vector<std::size_t> leak_rows(std::size_t n_rows, std::size_t n_si, LeakPlacement placement,
                                                 std::uint64_t seed = 0);

/// All cells HRS; n_si rows receive simultaneous inputs, the others leak
/// through their off FETs. Throws unless 1 <= n_si <= n_rows.
[[nodiscard]] LeakReport i_cc_leak(const ChannelConfig& cfg, std::size_t n_si,
                                   LeakPlacement placement = LeakPlacement::Even, std::uint64_t seed = 0);

struct IrDropRow {
    std::size_t row = 0;
    bool active = false;
    CellState state = CellState::Off;
    double v_sl = 0.0;      ///< source-line node voltage
    double i_branch = 0.0;
    /// V_read minus the voltage left across the row's cell and FET.
    double v_drop = 0.0;
    double v_cell = 0.0;    ///< voltage across the memristor alone
};

[[nodiscard]] std::vector<IrDropRow> ir_drop_profile(const ChannelInstance& inst, const ChannelSolution& sol);
[[nodiscard]] std::vector<IrDropRow> ir_drop_profile(const ChannelInstance& inst);

}  // namespace xbar
