#pragma once

// Closed-form channel model and the Poisson coincidence error model.
//
// Transistor series resistance R_T enters every branch exactly like the line
// resistance n*r, so the no-transistor formulas are the r_t = 0 case of the
// same code path.

#include <cstddef>
#include <span>
#include <vector>

#include "xbar/types.hpp"

namespace xbar::analytic {

/// Sensed current with exactly one active on-cell: V / (R_on + R_T + n r).
/// Independent of the cell's position along the channel.
[[nodiscard]] double i_sl_single_on(const ChannelConfig& cfg);

struct MarginReport {
    double k = 0.0;      ///< device on/off ratio R_off / R_on
    double k_eff = 0.0;  ///< ratio seen by the sense circuit
    double margin_fraction = 0.0;  ///< k_eff / k
};

/// k_eff = (k - 1) / (1 + series / r_on) + 1, series = R_T + n r.
[[nodiscard]] double effective_ratio(double k, double r_on, double series) noexcept;

[[nodiscard]] MarginReport effective_onoff_ratio(const ChannelConfig& cfg);

struct DeviceRequirement {
    double k = 0.0;          ///< device ratio needed
    double r_off_min = 0.0;  ///< k * R_on
};

/// Inverse of effective_onoff_ratio in k, for the R_on, R_T, n, r of `cfg`.
/// Requires k_eff_target > 1.
[[nodiscard]] DeviceRequirement required_device_ratio(double k_eff_target, const ChannelConfig& cfg);

/// Two simultaneously active rows at 1-based positions i < j (counted in line
/// segments from the driver), the cell at i on and the cell at j in
/// `state_j`. The driving rail segments up to i and the sensing rail segments
/// past j are shared, the (j - i) segments in between belong to one branch
/// each:
///
///   V / ( i r + [R_on + R_T + (j-i) r] || [(j-i) r + R_x + R_T] + (n-j) r )
///
/// Throws InvalidArgument unless 1 <= i < j <= n.
[[nodiscard]] double i_sl_two_active(const ChannelConfig& cfg, std::size_t i, std::size_t j, CellState state_j);

struct ErrorModelParams {
    std::size_t n_r = 1;
    double f = 0.0;        ///< per-input spike rate, Hz
    double t_pw = 1e-6;    ///< pulse width, s
    unsigned m_tol = 1;    ///< simultaneous pulses that produce an error output

    /// Mean number of concurrently active pulses, n_r f t_pw.
    [[nodiscard]] double lambda() const noexcept { return static_cast<double>(n_r) * f * t_pw; }
};

/// Throws InvalidArgument when a field is out of range.
void validate(const ErrorModelParams& p);

/// log P(N >= m) for N ~ Poisson(lambda); -inf when the probability is 0.
[[nodiscard]] double log_poisson_upper_tail(double lambda, unsigned m);

/// Stationary probability that at least m_tol pulses overlap. Superposed
/// Poisson arrivals with fixed-width pulses give a Poisson(n_r f t_pw)
/// occupancy count.
[[nodiscard]] double perr_analytic(const ErrorModelParams& p);

/// Smallest m with perr_analytic(n_r, f, t_pw, m) < p_target.
[[nodiscard]] unsigned min_tolerance_for_perr(std::size_t n_r, double f, double t_pw, double p_target);

struct MarginPoint {
    std::size_t n_rows = 0;
    double r_line = 0.0;
    double r_on = 0.0;
    double r_off = 0.0;
    double r_t = 0.0;
    MarginReport report;
};

/// One MarginPoint per (n_rows, r_line) pair, n_rows-major. An empty list
/// keeps the template's value on that axis. Evaluated through the
/// dispatched batch kernel.
[[nodiscard]] std::vector<MarginPoint> margin_sweep(const ChannelConfig& tmpl, std::span<const std::size_t> n_rows,
                                                    std::span<const double> r_line);

/// Batch form over arbitrary points; fills each point's report.
void evaluate_margins(std::span<MarginPoint> points);

}  // namespace xbar::analytic
