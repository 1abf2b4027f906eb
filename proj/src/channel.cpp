#include "xbar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "xbar/kernels.hpp"

namespace xbar {

ChannelInstance ChannelInstance::idle(const ChannelConfig& cfg) {
    ChannelInstance inst;
    inst.cfg = cfg;
    inst.cell_state.assign(cfg.n_rows, CellState::Off);
    inst.row_active.assign(cfg.n_rows, 0);
    return inst;
}

void ChannelInstance::validate() const {
    auto v = validate_config(cfg);
    if (!v.empty()) throw InvalidArgument("channel instance: " + v.front().field + ": " + v.front().message);
    if (cell_state.size() != cfg.n_rows || row_active.size() != cfg.n_rows)
        throw InvalidArgument("channel instance: per-row vectors must have n_rows entries");
    if (!cell_resistance.empty()) {
        if (cell_resistance.size() != cfg.n_rows)
            throw InvalidArgument("channel instance: cell_resistance must have n_rows entries");
        for (double r : cell_resistance) {
            if (!(r > 0.0) || !std::isfinite(r))
                throw InvalidArgument("channel instance: cell resistances must be finite and > 0");
        }
    }
}

std::vector<double> ChannelInstance::branch_conductances() const {
    const double r_fet_off = cfg.fet_off_resistance();
    std::vector<double> g(cfg.n_rows);
    for (std::size_t k = 0; k < cfg.n_rows; ++k) {
        const double fet = row_active[k] ? cfg.transistor.r_t : r_fet_off;
        if (std::isinf(fet)) {
            g[k] = 0.0;
            continue;
        }
        g[k] = 1.0 / (static_cast<double>(k + 1) * cfg.r_line + cell_r(k) + fet);
    }
    return g;
}

namespace {

ChannelSolution solve_decoupled(const ChannelInstance& inst, const std::vector<double>& g) {
    ChannelSolution sol;
    const std::size_t n = inst.cfg.n_rows;
    sol.node_voltages.assign(n, 0.0);
    sol.branch_currents.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        sol.branch_currents[k] = g[k] * inst.cfg.v_read;
        sol.i_sl += sol.branch_currents[k];
    }
    return sol;
}

}  // namespace

ChannelSolution solve_channel(const ChannelInstance& inst) {
    inst.validate();
    const auto g = inst.branch_conductances();
    if (inst.cfg.r_line == 0.0) return solve_decoupled(inst, g);

    const std::size_t n = inst.cfg.n_rows;
    ChannelSolution sol;
    sol.node_voltages.resize(n);
    sol.branch_currents.resize(n);
    std::vector<double> scratch(n);
    kernels::LadderBatch b{n,
                           1,
                           g.data(),
                           &inst.cfg.v_read,
                           &inst.cfg.r_line,
                           scratch.data(),
                           sol.node_voltages.data(),
                           sol.branch_currents.data(),
                           &sol.i_sl};
    kernels::detail::ladder_lane(b, 0);
    return sol;
}

std::vector<ChannelSolution> solve_channels(std::span<const ChannelInstance> insts) {
    std::vector<ChannelSolution> out(insts.size());
    std::map<std::size_t, std::vector<std::size_t>> by_length;
    for (std::size_t i = 0; i < insts.size(); ++i) {
        insts[i].validate();
        if (insts[i].cfg.r_line == 0.0) {
            out[i] = solve_decoupled(insts[i], insts[i].branch_conductances());
        } else {
            by_length[insts[i].cfg.n_rows].push_back(i);
        }
    }

    const auto& kernel = kernels::dispatch();
    for (const auto& [n, members] : by_length) {
        const std::size_t L = members.size();
        std::vector<double> g(n * L), v(L), r(L), scratch(n * L), v_node(n * L), i_branch(n * L), i_sl(L);
        for (std::size_t l = 0; l < L; ++l) {
            const auto& inst = insts[members[l]];
            const auto gl = inst.branch_conductances();
            for (std::size_t k = 0; k < n; ++k) g[k * L + l] = gl[k];
            v[l] = inst.cfg.v_read;
            r[l] = inst.cfg.r_line;
        }
        kernel.ladder_solve({n, L, g.data(), v.data(), r.data(), scratch.data(), v_node.data(), i_branch.data(),
                             i_sl.data()});
        for (std::size_t l = 0; l < L; ++l) {
            auto& sol = out[members[l]];
            sol.node_voltages.resize(n);
            sol.branch_currents.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                sol.node_voltages[k] = v_node[k * L + l];
                sol.branch_currents[k] = i_branch[k * L + l];
            }
            sol.i_sl = i_sl[l];
        }
    }
    return out;
}

FetLeakCalibration calibrate_fet_leak(double total_leak, std::size_t n_fets, double v_read) {
    if (!std::isfinite(total_leak) || total_leak < 0.0) throw InvalidArgument("calibrate_fet_leak: total leakage must be >= 0");
    if (n_fets == 0) throw InvalidArgument("calibrate_fet_leak: n_fets must be positive");
    if (!std::isfinite(v_read) || v_read <= 0.0) throw InvalidArgument("calibrate_fet_leak: v_read must be > 0");
    if (total_leak == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
    FetLeakCalibration c;
    c.i_leak_per_fet = total_leak / static_cast<double>(n_fets);
    c.r_fet_off = v_read / c.i_leak_per_fet;
    return c;
}

std::vector<std::size_t> leak_rows(std::size_t n_rows, std::size_t n_si, LeakPlacement placement,
                                   std::uint64_t seed) {
    if (n_si < 1 || n_si > n_rows) throw InvalidArgument("leak_rows: need 1 <= n_si <= n_rows");
    std::vector<std::size_t> rows;
    rows.reserve(n_si);
    if (placement == LeakPlacement::Even) {
        for (std::size_t k = 0; k < n_si; ++k) {
            rows.push_back(static_cast<std::size_t>(
                std::floor((static_cast<double>(k) + 0.5) * static_cast<double>(n_rows) / static_cast<double>(n_si))));
        }
        return rows;
    }
    std::vector<std::size_t> all(n_rows);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(seed, 0x1EA4));
    std::sample(all.begin(), all.end(), std::back_inserter(rows), static_cast<std::ptrdiff_t>(n_si), rng);
    return rows;
}

LeakReport i_cc_leak(const ChannelConfig& cfg, std::size_t n_si, LeakPlacement placement, std::uint64_t seed) {
    if (n_si < 1 || n_si > cfg.n_rows) throw InvalidArgument("i_cc_leak: need 1 <= n_si <= n_rows");
    const auto active = leak_rows(cfg.n_rows, n_si, placement, seed);

    std::vector<ChannelInstance> insts(2, ChannelInstance::idle(cfg));
    for (std::size_t row : active) insts[0].row_active[row] = 1;
    insts[1].row_active[leak_rows(cfg.n_rows, 1, LeakPlacement::Even).front()] = 1;
    const auto sols = solve_channels(insts);

    LeakReport rep;
    rep.i_cc_leak = sols[0].i_sl;
    rep.i_off_single = sols[1].i_sl;
    rep.ratio = rep.i_cc_leak / rep.i_off_single;
    for (std::size_t k = 0; k < cfg.n_rows; ++k) {
        (insts[0].row_active[k] ? rep.i_cells : rep.i_fets) += sols[0].branch_currents[k];
    }
    return rep;
}

std::vector<IrDropRow> ir_drop_profile(const ChannelInstance& inst, const ChannelSolution& sol) {
    const std::size_t n = inst.cfg.n_rows;
    if (sol.node_voltages.size() != n || sol.branch_currents.size() != n)
        throw InvalidArgument("ir_drop_profile: solution does not match instance");
    std::vector<IrDropRow> rows(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto& row = rows[k];
        row.row = k;
        row.active = inst.row_active[k] != 0;
        row.state = inst.cell_state[k];
        row.v_sl = sol.node_voltages[k];
        row.i_branch = sol.branch_currents[k];
        row.v_drop = static_cast<double>(k + 1) * inst.cfg.r_line * row.i_branch + row.v_sl;
        row.v_cell = row.i_branch * inst.cell_r(k);
    }
    return rows;
}

std::vector<IrDropRow> ir_drop_profile(const ChannelInstance& inst) {
    return ir_drop_profile(inst, solve_channel(inst));
}

}  // namespace xbar
