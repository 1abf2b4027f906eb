#pragma once

// Crossbar router emulation: a switch matrix, inputs pulsing on its word
// lines, and one current comparator per channel.
//
// Ideal mode drops all line parasitics and FET leakage; each active row adds
// V / (R_cell + R_T) to its channel. Solver mode builds a full channel
// instance per column and runs the ladder solver.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "xbar/config.hpp"
#include "xbar/types.hpp"

namespace xbar {

struct ChannelRead {
    double i_sl = 0.0;
    bool fired = false;     ///< i_sl > i_ref
    bool expected = false;  ///< some active row has an on cell in this channel
};

enum class ErrorClass { None, FalseOutput, MissedOutput };

[[nodiscard]] std::string_view to_string(ErrorClass e) noexcept;
[[nodiscard]] ErrorClass classify(const ChannelRead& r) noexcept;

/// Reusable per-matrix state for repeated reads.
class Router {
public:
    /// `cell_r` is row-major per-cell resistance (see cell_resistances);
    /// empty means nominal r_on / r_off. cfg.n_rows must equal matrix.n_wl().
    Router(SwitchMatrix matrix, ChannelConfig cfg, RouteMode mode, std::vector<double> cell_r = {});

    [[nodiscard]] const SwitchMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] const ChannelConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] RouteMode mode() const noexcept { return mode_; }

    /// One comparator read per channel with the given rows pulsing.
    [[nodiscard]] std::vector<ChannelRead> read(std::span<const std::size_t> active_rows) const;

private:
    [[nodiscard]] double cell_r(std::size_t wl, std::size_t ch) const;

    SwitchMatrix matrix_;
    ChannelConfig cfg_;
    RouteMode mode_;
    std::vector<double> cell_r_;
    std::vector<double> g_ideal_;
};

[[nodiscard]] std::vector<ChannelRead> route_event(const SwitchMatrix& matrix, std::span<const std::size_t> active_rows,
                                                   const ChannelConfig& cfg, RouteMode mode,
                                                   std::span<const double> cell_r = {});

struct TraceEvent {
    double time = 0.0;  ///< start of the interval over which the read holds
    std::size_t channel = 0;
    double i_sl = 0.0;
    bool fired = false;
    bool expected = false;
    ErrorClass error = ErrorClass::None;
};

struct RoutingTrace {
    std::vector<TraceEvent> events;
    std::size_t false_output = 0;
    std::size_t missed_output = 0;

    [[nodiscard]] std::size_t error_count() const noexcept { return false_output + missed_output; }
};

/// Event-driven emulation: the set of pulsing rows is constant between pulse
/// edges, so the router is read once per interval in which it changes and is
/// non-empty. Only channels that fired or were expected to fire are recorded.
/// With device.sigma_log > 0 cell resistances are drawn once from `seed`.
[[nodiscard]] RoutingTrace emulate(const SwitchMatrix& matrix, const SpikeTrainSet& trains, const ChannelConfig& cfg,
                                   RouteMode mode, std::uint64_t seed = 0);

}  // namespace xbar
