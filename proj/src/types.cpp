#include "xbar/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace xbar {

double ChannelConfig::fet_off_resistance() const noexcept {
    if (!(transistor.i_leak_per_fet > 0.0)) return std::numeric_limits<double>::infinity();
    return v_read / transistor.i_leak_per_fet;
}

std::vector<Violation> validate_config(const ChannelConfig& cfg) {
    std::vector<Violation> out;
    auto fail = [&](std::string field, std::string msg) {
        out.push_back({std::move(field), std::move(msg)});
    };
    auto finite = [](double x) { return std::isfinite(x); };

    if (cfg.n_rows < 1) fail("channel.n_rows", "a channel needs at least one row");
    if (!finite(cfg.r_line) || cfg.r_line < 0.0) fail("channel.r_line", "line resistance must be finite and >= 0");
    if (!finite(cfg.v_read) || cfg.v_read <= 0.0) fail("channel.v_read", "read voltage must be > 0");
    if (!finite(cfg.i_ref) || cfg.i_ref <= 0.0) fail("channel.i_ref", "comparator reference must be > 0");

    const auto& d = cfg.device;
    if (!finite(d.r_on) || d.r_on <= 0.0) fail("device.r_on", "r_on must be > 0");
    if (!finite(d.r_off) || !(d.r_off > d.r_on)) fail("device.r_off", "k must exceed 1 (r_off > r_on)");
    if (!finite(d.sigma_log) || d.sigma_log < 0.0) fail("device.sigma_log", "sigma_log must be >= 0");

    const auto& t = cfg.transistor;
    if (!finite(t.r_t) || t.r_t < 0.0) fail("transistor.r_t", "r_t must be >= 0");
    if (!finite(t.i_leak_per_fet) || t.i_leak_per_fet < 0.0)
        fail("transistor.i_leak_per_fet", "leakage current must be >= 0");
    return out;
}

SwitchMatrix::SwitchMatrix(std::size_t n_wl, std::size_t n_ch, CellState fill)
    : n_wl_(n_wl), n_ch_(n_ch), state_(n_wl * n_ch, fill) {
    if (n_wl == 0 || n_ch == 0) throw InvalidArgument("switch matrix dimensions must be positive");
}

CellState SwitchMatrix::at(std::size_t wl, std::size_t ch) const {
    if (wl >= n_wl_ || ch >= n_ch_) throw InvalidArgument("switch matrix index out of range");
    return state_[wl * n_ch_ + ch];
}

void SwitchMatrix::set(std::size_t wl, std::size_t ch, CellState s) {
    if (wl >= n_wl_ || ch >= n_ch_) throw InvalidArgument("switch matrix index out of range");
    state_[wl * n_ch_ + ch] = s;
}

std::vector<CellState> SwitchMatrix::column(std::size_t ch) const {
    if (ch >= n_ch_) throw InvalidArgument("switch matrix column out of range");
    std::vector<CellState> col(n_wl_);
    for (std::size_t w = 0; w < n_wl_; ++w) col[w] = state_[w * n_ch_ + ch];
    return col;
}

std::size_t SpikeTrainSet::total_pulses() const noexcept {
    std::size_t n = 0;
    for (const auto& p : pulses) n += p.size();
    return n;
}

void SpikeTrainSet::validate() const {
    if (pulses.size() != n_inputs) throw InvalidArgument("spike trains: pulse list count != n_inputs");
    if (!(t_pw > 0.0)) throw InvalidArgument("spike trains: t_pw must be > 0");
    if (!(duration > 0.0)) throw InvalidArgument("spike trains: duration must be > 0");
    for (const auto& train : pulses) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (train[i] < 0.0 || train[i] + t_pw > duration)
                throw InvalidArgument("spike trains: pulse outside [0, duration]");
            if (i > 0 && !(train[i] > train[i - 1]))
                throw InvalidArgument("spike trains: start times must be strictly increasing");
        }
    }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> cell_resistances(const SwitchMatrix& m, const DeviceParams& dev, std::uint64_t seed) {
    std::vector<double> r(m.n_wl() * m.n_ch());
    std::mt19937_64 rng(derive_seed(seed, 0xCE11));
    std::normal_distribution<double> z(0.0, 1.0);
    for (std::size_t w = 0; w < m.n_wl(); ++w) {
        for (std::size_t c = 0; c < m.n_ch(); ++c) {
            double base = dev.resistance(m.at(w, c));
            r[w * m.n_ch() + c] = dev.sigma_log > 0.0 ? base * std::exp(dev.sigma_log * z(rng)) : base;
        }
    }
    return r;
}

}  // namespace xbar
