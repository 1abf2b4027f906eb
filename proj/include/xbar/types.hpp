#pragma once

// Domain types shared by every module. All quantities are SI base units:
// ohms, volts, amperes, seconds, hertz. Nothing is stored pre-scaled.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xbar {

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class CellState : std::uint8_t { Off = 0, On = 1 };

struct DeviceParams {
    double r_on = 10e3;
    double r_off = 200e3;
    /// Lognormal spread of per-cell resistance multipliers; 0 disables variability.
    double sigma_log = 0.0;

    [[nodiscard]] double k() const noexcept { return r_off / r_on; }
    [[nodiscard]] double resistance(CellState s) const noexcept {
        return s == CellState::On ? r_on : r_off;
    }
    bool operator==(const DeviceParams&) const = default;
};

struct TransistorParams {
    /// Series resistance of an access FET with its gate driven.
    double r_t = 1.7e3;
    /// Current through one off-state FET at the configured read voltage; 0 disables leakage.
    double i_leak_per_fet = 10e-9 / 256.0;

    bool operator==(const TransistorParams&) const = default;
};

/// One routing channel (a crossbar column) and the devices on it.
struct ChannelConfig {
    std::size_t n_rows = 1024;
    /// Unit segment resistance between adjacent cells, same on both lines.
    double r_line = 2.5;
    double v_read = 0.2;
    /// Comparator threshold on the sensed source-line current.
    double i_ref = 6e-6;
    DeviceParams device;
    TransistorParams transistor;

    /// Total line resistance seen by any single branch, n * r.
    [[nodiscard]] double line_resistance() const noexcept {
        return static_cast<double>(n_rows) * r_line;
    }
    /// Linear off-resistance of an idle FET, +inf when leakage is disabled.
    [[nodiscard]] double fet_off_resistance() const noexcept;

    bool operator==(const ChannelConfig&) const = default;
};

struct Violation {
    std::string field;
    std::string message;
};

/// Every violated invariant of `cfg`; empty means all solvers accept it.
[[nodiscard]] std::vector<Violation> validate_config(const ChannelConfig& cfg);

/// Binary on/off state of each crosspoint; rows are word lines (inputs),
/// columns are routing channels (outputs).
class SwitchMatrix {
public:
    SwitchMatrix(std::size_t n_wl, std::size_t n_ch, CellState fill = CellState::Off);

    [[nodiscard]] std::size_t n_wl() const noexcept { return n_wl_; }
    [[nodiscard]] std::size_t n_ch() const noexcept { return n_ch_; }

    [[nodiscard]] CellState at(std::size_t wl, std::size_t ch) const;
    void set(std::size_t wl, std::size_t ch, CellState s);

    /// Column `ch` as a per-row state vector.
    [[nodiscard]] std::vector<CellState> column(std::size_t ch) const;

    bool operator==(const SwitchMatrix&) const = default;

private:
    std::size_t n_wl_;
    std::size_t n_ch_;
    std::vector<CellState> state_;
};

/// Rectangular pulses of common width on each input line.
struct SpikeTrainSet {
    std::size_t n_inputs = 0;
    /// Per input, strictly increasing pulse start times.
    std::vector<std::vector<double>> pulses;
    double t_pw = 1e-6;
    double duration = 1.0;

    [[nodiscard]] std::size_t total_pulses() const noexcept;
    /// Throws InvalidArgument if ordering or extent invariants do not hold.
    void validate() const;
};

/// Solved state of one channel.
struct ChannelSolution {
    /// Source-line node voltages, row 0 first; the last node is the sense terminal.
    std::vector<double> node_voltages;
    /// Per-row branch current, positive toward the source line.
    std::vector<double> branch_currents;
    /// Current delivered into the sense terminal.
    double i_sl = 0.0;
};

/// Per-cell resistances for a matrix, row-major (wl * n_ch + ch). With
/// sigma_log > 0 each cell gets an independent lognormal multiplier drawn
/// from a generator seeded by `seed`.
[[nodiscard]] std::vector<double> cell_resistances(const SwitchMatrix& m, const DeviceParams& dev,
                                                   std::uint64_t seed);

/// Mixes a base seed with a stream index (splitmix64 finalizer).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace xbar
