#pragma once

// Poisson spike trains, pulse-overlap statistics and the Monte Carlo
// counterpart of analytic::perr_analytic.
//
// A pulse starting at s occupies [s, s + t_pw). Pulses that only touch
// (one ends exactly where another starts) never overlap.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xbar/analytic.hpp"
#include "xbar/types.hpp"

namespace xbar {

/// Independent homogeneous Poisson arrivals of rate f per input. Starts are
/// drawn on [0, duration - t_pw] so every pulse ends by `duration`. Input i
/// uses its own generator seeded from (seed, i).
[[nodiscard]] SpikeTrainSet gen_poisson_trains(std::size_t n_inputs, double f, double t_pw, double duration,
                                               std::uint64_t seed);

struct ConcurrencyProfile {
    double t_begin = 0.0;
    double t_end = 0.0;
    /// dwell[m] = time spent with exactly m pulses active.
    std::vector<double> dwell;

    [[nodiscard]] std::size_t max_level() const noexcept { return dwell.empty() ? 0 : dwell.size() - 1; }
    [[nodiscard]] double time_at_or_above(std::size_t m) const noexcept;
    [[nodiscard]] double window() const noexcept { return t_end - t_begin; }
};

/// Sweep-line over pulse edges restricted to [t_begin, t_end].
[[nodiscard]] ConcurrencyProfile concurrency_profile(const SpikeTrainSet& trains, double t_begin, double t_end);
[[nodiscard]] ConcurrencyProfile concurrency_profile(const SpikeTrainSet& trains);

/// Largest number of simultaneously active pulses over [0, duration].
[[nodiscard]] std::size_t max_concurrency(const SpikeTrainSet& trains);

struct McEstimate {
    double p_hat = 0.0;
    /// 95% interval; symmetric normal approximation, or Clopper-Pearson
    /// (halfwidth = larger side) when p_hat * n_trials < 10.
    double ci_halfwidth = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// Independent occupancy samples the estimate is worth: floor(duration / t_pw).
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] bool covers(double p) const noexcept { return ci_low <= p && p <= ci_high; }
};

/// 95% binomial interval for a proportion observed over n_trials samples.
[[nodiscard]] McEstimate binomial_interval(double p_hat, std::uint64_t n_trials);

struct McOptions {
    /// Independent simulation blocks, each with its own sub-seed and a
    /// one-pulse-width warm-up so it starts in the stationary regime.
    std::size_t blocks = 16;
    unsigned jobs = 1;
};

/// Time-weighted fraction of [0, duration] during which at least m_tol pulses
/// overlap. Deterministic in (params, duration, seed, blocks); `jobs` only
/// changes how blocks are scheduled.
[[nodiscard]] McEstimate perr_monte_carlo(const analytic::ErrorModelParams& params, double duration,
                                          std::uint64_t seed, const McOptions& opts = {});

}  // namespace xbar
