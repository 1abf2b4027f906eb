#include "xbar/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include <boost/math/special_functions/beta.hpp>

#include "xbar/parallel.hpp"

namespace xbar {

SpikeTrainSet gen_poisson_trains(std::size_t n_inputs, double f, double t_pw, double duration, std::uint64_t seed) {
    if (!std::isfinite(f) || f < 0.0) throw InvalidArgument("gen_poisson_trains: f must be >= 0");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw InvalidArgument("gen_poisson_trains: duration must be > 0");
    if (!(t_pw > 0.0) || t_pw > duration) throw InvalidArgument("gen_poisson_trains: need 0 < t_pw <= duration");

    SpikeTrainSet set;
    set.n_inputs = n_inputs;
    set.t_pw = t_pw;
    set.duration = duration;
    set.pulses.resize(n_inputs);
    const double span = duration - t_pw;
    if (f == 0.0 || span <= 0.0) return set;

    for (std::size_t i = 0; i < n_inputs; ++i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        std::poisson_distribution<std::uint64_t> count(f * span);
        std::uniform_real_distribution<double> when(0.0, span);
        auto& train = set.pulses[i];
        train.resize(count(rng));
        for (double& t : train) t = when(rng);
        std::sort(train.begin(), train.end());
        train.erase(std::unique(train.begin(), train.end()), train.end());
    }
    return set;
}

double ConcurrencyProfile::time_at_or_above(std::size_t m) const noexcept {
    double t = 0.0;
    for (std::size_t level = m; level < dwell.size(); ++level) t += dwell[level];
    return t;
}

ConcurrencyProfile concurrency_profile(const SpikeTrainSet& trains, double t_begin, double t_end) {
    if (!(t_end >= t_begin)) throw InvalidArgument("concurrency_profile: empty or inverted window");
    std::vector<std::pair<double, int>> edges;
    edges.reserve(2 * trains.total_pulses());
    for (const auto& train : trains.pulses) {
        for (double s : train) {
            edges.emplace_back(s, +1);
            edges.emplace_back(s + trains.t_pw, -1);
        }
    }
    // Ends sort before starts at equal times, so touching pulses never stack.
    std::sort(edges.begin(), edges.end());

    ConcurrencyProfile prof;
    prof.t_begin = t_begin;
    prof.t_end = t_end;
    auto add = [&](std::size_t level, double dt) {
        if (prof.dwell.size() <= level) prof.dwell.resize(level + 1, 0.0);
        prof.dwell[level] += dt;
    };

    std::size_t level = 0;
    double cursor = t_begin;
    for (const auto& [t, delta] : edges) {
        if (t > cursor) {
            const double upto = std::min(t, t_end);
            if (upto > cursor) {
                add(level, upto - cursor);
                cursor = upto;
            }
        }
        level = delta > 0 ? level + 1 : level - 1;
    }
    if (t_end > cursor) add(level, t_end - cursor);
    while (!prof.dwell.empty() && prof.dwell.back() == 0.0) prof.dwell.pop_back();
    return prof;
}

ConcurrencyProfile concurrency_profile(const SpikeTrainSet& trains) {
    return concurrency_profile(trains, 0.0, trains.duration);
}

std::size_t max_concurrency(const SpikeTrainSet& trains) { return concurrency_profile(trains).max_level(); }

McEstimate binomial_interval(double p_hat, std::uint64_t n_trials) {
    McEstimate est;
    est.p_hat = p_hat;
    est.n_trials = n_trials;
    if (n_trials == 0) {
        est.ci_low = 0.0;
        est.ci_high = 1.0;
        est.ci_halfwidth = 1.0;
        return est;
    }
    const double n = static_cast<double>(n_trials);
    constexpr double z = 1.959963984540054;
    if (p_hat * n < 10.0) {
        const double x = std::round(p_hat * n);
        est.ci_low = x == 0.0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, 0.025);
        est.ci_high = x >= n ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 0.975);
        est.ci_halfwidth = std::max(p_hat - est.ci_low, est.ci_high - p_hat);
        return est;
    }
    est.ci_halfwidth = z * std::sqrt(p_hat * (1.0 - p_hat) / n);
    est.ci_low = std::max(0.0, p_hat - est.ci_halfwidth);
    est.ci_high = std::min(1.0, p_hat + est.ci_halfwidth);
    return est;
}

McEstimate perr_monte_carlo(const analytic::ErrorModelParams& params, double duration, std::uint64_t seed,
                            const McOptions& opts) {
    analytic::validate(params);
    if (!(duration > 0.0) || !std::isfinite(duration)) throw InvalidArgument("perr_monte_carlo: duration must be > 0");
    if (opts.blocks == 0) throw InvalidArgument("perr_monte_carlo: need at least one block");

    const auto n_trials = static_cast<std::uint64_t>(std::floor(duration / params.t_pw));
    if (params.f == 0.0) {
        McEstimate est;
        est.n_trials = n_trials;
        est.seed = seed;
        return est;
    }

    const double block_len = duration / static_cast<double>(opts.blocks);
    const double t_pw = params.t_pw;
    std::vector<double> busy(opts.blocks, 0.0);
    parallel_for(opts.blocks, opts.jobs, [&](std::size_t b) {
        // Pulses may start up to one width before the measured window opens.
        auto trains = gen_poisson_trains(params.n_r, params.f, t_pw, block_len + 2.0 * t_pw, derive_seed(seed, b));
        busy[b] = concurrency_profile(trains, t_pw, block_len + t_pw).time_at_or_above(params.m_tol);
    });

    double total = 0.0;
    for (double t : busy) total += t;
    auto est = binomial_interval(std::clamp(total / duration, 0.0, 1.0), n_trials);
    est.seed = seed;
    return est;
}

}  // namespace xbar
