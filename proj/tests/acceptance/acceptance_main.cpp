// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "xbar/analytic.hpp"
#include "xbar/channel.hpp"
#include "xbar/dense_oracle.hpp"
#include "xbar/spikes.hpp"
#include "xbar/sweep.hpp"

using namespace xbar;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

ChannelConfig random_config(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ChannelConfig c;
    c.n_rows = n;
    c.r_line = 0.05 + 20 * u(rng);
    c.v_read = 0.1 + 0.5 * u(rng);
    c.device.r_on = 1e3 + 1e5 * u(rng);
    c.device.r_off = c.device.r_on * (1.5 + 1e3 * u(rng));
    c.transistor.r_t = 3e3 * u(rng);
    c.transistor.i_leak_per_fet = 0;
    return c;
}

// Closed-form effective ratio vs ratio of solved single-cell currents.
Outcome c1() {
    std::mt19937_64 rng(101);
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        auto c = random_config(rng, 1 + rng() % 64);
        const std::size_t row = rng() % c.n_rows;
        auto on = ChannelInstance::idle(c);
        on.cell_state[row] = CellState::On;
        on.row_active[row] = 1;
        auto off = ChannelInstance::idle(c);
        off.row_active[row] = 1;
        const double ratio = solve_channel(on).i_sl / solve_channel(off).i_sl;
        worst = std::max(worst, rel(ratio, analytic::effective_onoff_ratio(c).k_eff));
    }
    return {worst <= 1e-9, "200 configs, worst rel err " + num(worst) + " (tol 1e-9)"};
}

// Line resistance equal to R_on, no transistor: k_eff = k/2 + 1/2.
Outcome c2() {
    double worst = 0;
    for (double k : {2.0, 10.0, 20.0, 100.0}) {
        ChannelConfig c;
        c.n_rows = 1000;
        c.r_line = 10.0;
        c.device.r_on = 10e3;
        c.device.r_off = k * c.device.r_on;
        c.transistor.r_t = 0;
        const double got = analytic::effective_onoff_ratio(c).k_eff;
        worst = std::max(worst, std::abs(got - (k / 2 + 0.5)));
    }
    return {worst <= 1e-12, "k in {2,10,20,100}, worst abs err " + num(worst) + " (tol 1e-12)"};
}

// Superset activation with an on-row strictly raises the sensed current.
Outcome c3() {
    std::mt19937_64 rng(303);
    int violations = 0, trials = 0;
    while (trials < 10000) {
        const std::size_t n = 1 + rng() % 64;
        auto c = random_config(rng, n);
        if (rng() % 2) c.transistor.i_leak_per_fet = 1e-9 * (rng() % 100) / 100.0;
        auto base = ChannelInstance::idle(c);
        for (std::size_t k = 0; k < n; ++k) {
            base.cell_state[k] = rng() % 3 == 0 ? CellState::On : CellState::Off;
            base.row_active[k] = rng() % 3 == 0;
        }
        const std::size_t anchor = rng() % n;
        base.cell_state[anchor] = CellState::On;
        base.row_active[anchor] = 1;
        auto more = base;
        bool added = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!more.row_active[k] && rng() % 2) {
                more.row_active[k] = 1;
                added = true;
            }
        }
        if (!added) continue;
        ++trials;
        if (!(solve_channel(more).i_sl > solve_channel(base).i_sl)) ++violations;
    }
    return {violations == 0, std::to_string(trials) + " trials, " + std::to_string(violations) + " violations"};
}

// Leakage accumulation on a 1024-row channel with 10 simultaneous inputs.
Outcome c4() {
    ChannelConfig c;
    c.n_rows = 1024;
    c.r_line = 2.5;
    c.v_read = 0.2;
    c.device.r_on = 10e3;
    c.transistor.r_t = 1.7e3;
    c.transistor.i_leak_per_fet = calibrate_fet_leak(10e-9, 256, c.v_read).i_leak_per_fet;

    c.device.r_off = 10e6;
    const auto mid = i_cc_leak(c, 10);
    c.device.r_off = 100e6;
    const auto high = i_cc_leak(c, 10);
    c.device.r_off = 1e6;
    const auto low = i_cc_leak(c, 10);

    const bool ok_mid = std::abs(mid.ratio - 4.0) <= 0.1 && mid.ratio < 5.0;
    const bool ok_high = high.i_fets > high.i_cells;
    const double low_share = low.i_fets / low.i_cells;
    const bool ok_low = low_share < 0.03;
    return {ok_mid && ok_high && ok_low,
            "ratio@10M " + num(mid.ratio) + "; fet/cell@100M " + num(high.i_fets / high.i_cells) + "; fet/cell@1M " +
                num(low_share)};
}

// Error-probability anchors for microsecond and 10 ns pulses.
Outcome c5() {
    std::vector<double> hits;
    for (double f = 100.0; f <= 1000.0; f += 1.0) {
        const bool m20 = analytic::perr_analytic({4096, f, 1e-6, 20}) < 1e-10;
        const bool m15 = analytic::perr_analytic({4096, f, 1e-6, 15}) < 1e-10;
        const bool ns10 = analytic::perr_analytic({4096, f, 10e-9, 10}) < 1e-10;
        if (m20 && !m15 && ns10) hits.push_back(f);
    }
    if (hits.empty()) return {false, "no rate in [100, 1000] Hz satisfies all three conditions"};
    return {true, std::to_string(hits.size()) + " rates qualify, " + num(hits.front()) + ".." + num(hits.back()) +
                      " Hz; at 732 Hz p(m=20) = " + num(analytic::perr_analytic({4096, 732, 1e-6, 20}))};
}

// Monte Carlo interval coverage of the analytic value.
Outcome c6() {
    struct Point { std::size_t n_r; double f; unsigned m; };
    const Point pts[] = {{256, 500, 2}, {256, 1000, 2}, {256, 2000, 3}, {256, 4000, 4}, {256, 8000, 5}};
    constexpr double t_pw = 1e-6;
    constexpr double duration = 0.2;
    constexpr int seeds = 20;
    bool all = true;
    std::string detail;
    for (const auto& p : pts) {
        analytic::ErrorModelParams e{p.n_r, p.f, t_pw, p.m};
        const double truth = analytic::perr_analytic(e);
        if (truth < 1e-3 || truth > 1e-1) return {false, "point outside [1e-3, 1e-1]: " + num(truth)};
        int covered = 0;
        for (int s = 1; s <= seeds; ++s) covered += perr_monte_carlo(e, duration, static_cast<std::uint64_t>(s)).covers(truth);
        all = all && covered >= 18;
        if (!detail.empty()) detail += ", ";
        detail += "p=" + num(truth) + ":" + std::to_string(covered) + "/20";
    }
    return {all, detail};
}

// Multicast demo and coincidence failure.
Outcome c7() {
    const auto demo = run_demo(ChannelConfig{});
    std::size_t fired = 0;
    for (const auto& e : demo.events) fired += e.fired;
    const bool ok_demo = fired == 3 && demo.error_count() == 0;
    const auto fail = run_coincidence_failure(ChannelConfig{});
    const bool ok_fail = fail.false_output > 0 && fail.missed_output == 0;
    return {ok_demo && ok_fail, "demo fired " + std::to_string(fired) + " errors " + std::to_string(demo.error_count()) +
                                    "; coincidence false_output " + std::to_string(fail.false_output) +
                                    " missed_output " + std::to_string(fail.missed_output)};
}

// Fast ladder path vs dense nodal oracle.
Outcome c8() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    int count = 0;
    for (std::size_t n : {4u, 16u, 64u}) {
        for (int t = 0; t < 167 && count < 500; ++t, ++count) {
            auto c = random_config(rng, n);
            c.transistor.i_leak_per_fet = rng() % 2 ? 1e-9 * u(rng) : 0.0;
            auto inst = ChannelInstance::idle(c);
            for (std::size_t k = 0; k < n; ++k) {
                inst.cell_state[k] = rng() % 3 == 0 ? CellState::On : CellState::Off;
                inst.row_active[k] = rng() % 2;
            }
            inst.row_active[rng() % n] = 1;
            const double a = solve_channel(inst).i_sl;
            const double b = dense_oracle_solve(inst).i_sl;
            worst = std::max(worst, rel(a, b));
        }
    }
    return {worst <= 1e-10, std::to_string(count) + " instances, worst rel err " + num(worst) + " (tol 1e-10)"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion all[] = {
        {1, "closed-form effective ratio vs solver", 5.0, c1},
        {2, "half-line identity k' = k/2 + 1/2", 1.0, c2},
        {3, "superset activation ordering", 30.0, c3},
        {4, "FET leakage vs off-cell accumulation", 1.0, c4},
        {5, "error-probability tolerance anchors", 1.0, c5},
        {6, "Monte Carlo vs analytic coverage", 120.0, c6},
        {7, "multicast demo and coincidence failure", 1.0, c7},
        {8, "ladder solver vs dense oracle", 30.0, c8},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt <= c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s criterion %d: %s | %s | %.3f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), dt, c.budget_s, in_time ? "" : " over budget");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
    return failed == 0 ? 0 : 1;
}
