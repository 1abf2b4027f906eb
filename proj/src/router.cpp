#include "xbar/router.hpp"

#include <algorithm>
#include <utility>

#include "xbar/channel.hpp"
#include "xbar/kernels.hpp"

namespace xbar {

std::string_view to_string(ErrorClass e) noexcept {
    switch (e) {
        case ErrorClass::FalseOutput: return "false_output";
        case ErrorClass::MissedOutput: return "missed_output";
        case ErrorClass::None: break;
    }
    return "none";
}

ErrorClass classify(const ChannelRead& r) noexcept {
    if (r.fired == r.expected) return ErrorClass::None;
    return r.fired ? ErrorClass::FalseOutput : ErrorClass::MissedOutput;
}

Router::Router(SwitchMatrix matrix, ChannelConfig cfg, RouteMode mode, std::vector<double> cells)
    : matrix_(std::move(matrix)), cfg_(std::move(cfg)), mode_(mode), cell_r_(std::move(cells)) {
    auto v = validate_config(cfg_);
    if (!v.empty()) throw InvalidArgument("router: " + v.front().field + ": " + v.front().message);
    if (cfg_.n_rows != matrix_.n_wl())
        throw InvalidArgument("router: channel n_rows must equal the matrix word-line count");
    if (!cell_r_.empty() && cell_r_.size() != matrix_.n_wl() * matrix_.n_ch())
        throw InvalidArgument("router: cell resistance grid does not match the matrix");
    if (mode_ == RouteMode::Ideal) {
        g_ideal_.resize(matrix_.n_wl() * matrix_.n_ch());
        for (std::size_t w = 0; w < matrix_.n_wl(); ++w)
            for (std::size_t c = 0; c < matrix_.n_ch(); ++c)
                g_ideal_[w * matrix_.n_ch() + c] = 1.0 / (cell_r(w, c) + cfg_.transistor.r_t);
    }
}

double Router::cell_r(std::size_t wl, std::size_t ch) const {
    return cell_r_.empty() ? cfg_.device.resistance(matrix_.at(wl, ch)) : cell_r_[wl * matrix_.n_ch() + ch];
}

std::vector<ChannelRead> Router::read(std::span<const std::size_t> active_rows) const {
    const std::size_t n_ch = matrix_.n_ch();
    for (std::size_t r : active_rows) {
        if (r >= matrix_.n_wl()) throw InvalidArgument("route_event: active row out of range");
    }
    std::vector<ChannelRead> out(n_ch);
    for (std::size_t r : active_rows)
        for (std::size_t c = 0; c < n_ch; ++c)
            if (matrix_.at(r, c) == CellState::On) out[c].expected = true;

    if (mode_ == RouteMode::Ideal) {
        std::vector<double> acc(n_ch, 0.0);
        kernels::dispatch().accumulate_rows(g_ideal_.data(), n_ch, active_rows.data(), active_rows.size(),
                                            acc.data());
        for (std::size_t c = 0; c < n_ch; ++c) out[c].i_sl = cfg_.v_read * acc[c];
    } else {
        std::vector<ChannelInstance> insts(n_ch, ChannelInstance::idle(cfg_));
        for (std::size_t c = 0; c < n_ch; ++c) {
            auto& inst = insts[c];
            inst.cell_state = matrix_.column(c);
            for (std::size_t r : active_rows) inst.row_active[r] = 1;
            if (!cell_r_.empty()) {
                inst.cell_resistance.resize(matrix_.n_wl());
                for (std::size_t w = 0; w < matrix_.n_wl(); ++w) inst.cell_resistance[w] = cell_r(w, c);
            }
        }
        const auto sols = solve_channels(insts);
        for (std::size_t c = 0; c < n_ch; ++c) out[c].i_sl = sols[c].i_sl;
    }
    for (auto& r : out) r.fired = r.i_sl > cfg_.i_ref;
    return out;
}

std::vector<ChannelRead> route_event(const SwitchMatrix& matrix, std::span<const std::size_t> active_rows,
                                     const ChannelConfig& cfg, RouteMode mode, std::span<const double> cell_r) {
    return Router(matrix, cfg, mode, std::vector<double>(cell_r.begin(), cell_r.end())).read(active_rows);
}

RoutingTrace emulate(const SwitchMatrix& matrix, const SpikeTrainSet& trains, const ChannelConfig& cfg,
                     RouteMode mode, std::uint64_t seed) {
    trains.validate();
    if (trains.n_inputs != matrix.n_wl()) throw InvalidArgument("emulate: trains.n_inputs must equal matrix.n_wl");
    std::vector<double> cell_r;
    if (cfg.device.sigma_log > 0.0) cell_r = cell_resistances(matrix, cfg.device, seed);
    const Router router(matrix, cfg, mode, std::move(cell_r));

    struct Edge {
        double t;
        int delta;
        std::size_t row;
        bool operator<(const Edge& o) const {
            if (t != o.t) return t < o.t;
            if (delta != o.delta) return delta < o.delta;
            return row < o.row;
        }
    };
    std::vector<Edge> edges;
    edges.reserve(2 * trains.total_pulses());
    for (std::size_t w = 0; w < trains.n_inputs; ++w) {
        for (double s : trains.pulses[w]) {
            edges.push_back({s, +1, w});
            edges.push_back({s + trains.t_pw, -1, w});
        }
    }
    std::sort(edges.begin(), edges.end());

    RoutingTrace trace;
    std::vector<std::size_t> depth(matrix.n_wl(), 0);
    std::vector<std::size_t> prev_active;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < edges.size();) {
        const double t = edges[i].t;
        for (; i < edges.size() && edges[i].t == t; ++i)
            depth[edges[i].row] = edges[i].delta > 0 ? depth[edges[i].row] + 1 : depth[edges[i].row] - 1;
        active.clear();
        for (std::size_t w = 0; w < depth.size(); ++w)
            if (depth[w] > 0) active.push_back(w);
        if (active == prev_active) continue;
        prev_active = active;
        if (active.empty()) continue;

        const auto reads = router.read(active);
        for (std::size_t c = 0; c < reads.size(); ++c) {
            const auto& r = reads[c];
            if (!r.fired && !r.expected) continue;
            const auto err = classify(r);
            trace.events.push_back({t, c, r.i_sl, r.fired, r.expected, err});
            if (err == ErrorClass::FalseOutput) ++trace.false_output;
            if (err == ErrorClass::MissedOutput) ++trace.missed_output;
        }
    }
    return trace;
}

}  // namespace xbar
