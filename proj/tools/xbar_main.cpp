// xbar: command-line front end for the crossbar router models.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xbar/analytic.hpp"
#include "xbar/channel.hpp"
#include "xbar/config.hpp"
#include "xbar/csv.hpp"
#include "xbar/router.hpp"
#include "xbar/spikes.hpp"
#include "xbar/sweep.hpp"

namespace {

using nlohmann::json;
using namespace xbar;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_unknown_preset = 4;

struct Globals {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
};

AppConfig resolve_config(const Globals& g) {
    json doc = to_json(g.config.empty() ? AppConfig{} : load_config(g.config));
    for (const auto& s : g.sets) apply_override(doc, s);
    auto cfg = from_json(doc);
    if (g.seed) cfg.simulation.seed = *g.seed;
    auto v = validate_app_config(cfg);
    if (!v.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : v) msg += "\n  " + e.field + ": " + e.message;
        throw InvalidArgument(msg);
    }
    return cfg;
}

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const Globals& g, Fn&& fn) {
    if (g.out.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + g.out);
    fn(f);
}

json margin_json(const analytic::MarginReport& m) {
    return {{"k", m.k}, {"k_eff", m.k_eff}, {"margin_fraction", m.margin_fraction}};
}

std::vector<std::size_t> rows_field(const json& j, const char* key, std::size_t n) {
    std::vector<std::size_t> rows;
    if (!j.contains(key)) return rows;
    for (const auto& v : j.at(key)) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw InvalidArgument(std::string("instance: ") + key + " must list non-negative row indices");
        auto r = v.get<std::size_t>();
        if (r >= n) throw InvalidArgument(std::string("instance: ") + key + " index " + std::to_string(r) +
                                          " out of range for n_rows = " + std::to_string(n));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Memristive crossbar router simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "JSON configuration file");
    app.add_option("--set", g.sets, "Override a config field, e.g. device.r_off=1e6")->take_all();
    app.add_option("--out", g.out, "Output file (directory for figures)");
    app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

    // analytic
    auto* an = app.add_subcommand("analytic", "Closed-form currents, margins and error probability");
    std::optional<double> k_eff_target;
    std::optional<std::size_t> two_i, two_j;
    std::string two_state = "off";
    an->add_option("--k-eff-target", k_eff_target, "Also invert for the device ratio giving this k_eff");
    an->add_option("--i", two_i, "First of two active rows (1-based)");
    an->add_option("--j", two_j, "Second of two active rows (1-based)");
    an->add_option("--state-j", two_state, "State of the cell at j (on|off)")->check(CLI::IsMember({"on", "off"}));

    // solve
    auto* so = app.add_subcommand("solve", "Solve one channel instance");
    std::string instance_path;
    bool as_csv = false;
    so->add_option("instance", instance_path, "Instance JSON with on_rows and active_rows")->required();
    so->add_flag("--csv", as_csv, "Emit the per-row profile as CSV");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo error probability");
    std::optional<std::size_t> mc_n_r;
    std::optional<double> mc_f, mc_t_pw, mc_duration;
    std::optional<unsigned> mc_m;
    mc->add_option("--n-r", mc_n_r, "Inputs per channel");
    mc->add_option("--f", mc_f, "Per-input rate (Hz)");
    mc->add_option("--t-pw", mc_t_pw, "Pulse width (s)");
    mc->add_option("--m-tol", mc_m, "Tolerated simultaneous pulses");
    mc->add_option("--duration", mc_duration, "Simulated time (s)");
    mc->add_option("--seed", g.seed, "Base random seed");

    // emulate
    auto* em = app.add_subcommand("emulate", "Route spike trains through a switch matrix");
    std::string matrix_path, trains_path, poisson, mode_str;
    em->add_option("--matrix", matrix_path, "0/1 grid CSV, one line per word line")->required();
    auto* tr_opt = em->add_option("--trains", trains_path, "CSV of input_index,start_s");
    auto* po_opt = em->add_option("--poisson", poisson, "Random trains, e.g. f=500");
    tr_opt->excludes(po_opt);
    em->add_option("--mode", mode_str, "ideal|solver")->check(CLI::IsMember({"ideal", "solver"}));

    // sweep
    auto* sw = app.add_subcommand("sweep", "Grid sweep over config fields");
    std::vector<std::string> axes;
    std::string quantity = "margin";
    std::size_t sweep_n_si = 10;
    std::string sweep_preset;
    sw->add_option("--axis", axes, "path=v1,v2,... (repeatable)");
    sw->add_option("--quantity", quantity, "margin|error|leak");
    sw->add_option("--n-si", sweep_n_si, "Simultaneous inputs for the leak quantity");
    sw->add_option("--preset", sweep_preset, "Run a named preset instead of axes");

    // figures
    auto* fg = app.add_subcommand("figures", "Write the data behind a named figure");
    std::string fig_name;
    fg->add_option("name", fig_name, "fig6|fig8|fig10|fig11|demo_fig2|error_fig3")->required();

    // design-rules
    auto* dr = app.add_subcommand("design-rules", "Device requirements for a target error probability");
    std::optional<std::size_t> dr_n;
    std::string dr_regime = "us";
    std::optional<double> dr_p, dr_r_on;
    dr->add_option("--n-rows", dr_n, "Rows per channel");
    dr->add_option("--regime", dr_regime, "Pulse regime: us (1 us) or ns (10 ns)");
    dr->add_option("--p-target", dr_p, "Target error probability");
    dr->add_option("--r-on", dr_r_on, "LRS resistance (ohm)");

    // calibrate
    auto* ca = app.add_subcommand("calibrate", "Per-FET leakage from a measured channel total");
    double cal_total = 10e-9;
    std::size_t cal_fets = 256;
    std::optional<double> cal_v;
    ca->add_option("--total-leak", cal_total, "Channel leakage (A)");
    ca->add_option("--n-fets", cal_fets, "FETs on the measured channel");
    ca->add_option("--v-read", cal_v, "Read voltage (V)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    try {
        const AppConfig cfg = resolve_config(g);

        if (*an) {
            const auto& ch = cfg.channel;
            const auto& s = cfg.simulation;
            analytic::ErrorModelParams p{ch.n_rows, s.f_hz, s.t_pw_s, s.m_tol};
            json out = {{"i_sl_single_on_a", analytic::i_sl_single_on(ch)},
                        {"margin", margin_json(analytic::effective_onoff_ratio(ch))},
                        {"error_model",
                         {{"n_r", p.n_r},
                          {"f_hz", p.f},
                          {"t_pw_s", p.t_pw},
                          {"m_tol", p.m_tol},
                          {"lambda", p.lambda()},
                          {"p_err", analytic::perr_analytic(p)},
                          {"p_target", cfg.sweep.p_target},
                          {"m_tol_for_target",
                           analytic::min_tolerance_for_perr(p.n_r, p.f, p.t_pw, cfg.sweep.p_target)}}}};
            if (k_eff_target) {
                auto req = analytic::required_device_ratio(*k_eff_target, ch);
                out["device_requirement"] = {{"k_eff_target", *k_eff_target}, {"k", req.k}, {"r_off_min", req.r_off_min}};
            }
            if (two_i || two_j) {
                if (!two_i || !two_j) throw InvalidArgument("--i and --j must be given together");
                auto st = two_state == "on" ? CellState::On : CellState::Off;
                out["two_active"] = {{"i", *two_i},
                                     {"j", *two_j},
                                     {"state_j", two_state},
                                     {"i_sl_a", analytic::i_sl_two_active(ch, *two_i, *two_j, st)}};
            }
            emit(g, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
        } else if (*so) {
            std::ifstream f(instance_path);
            if (!f) throw InvalidArgument("cannot open " + instance_path);
            json j;
            try {
                f >> j;
            } catch (const json::exception& e) {
                throw InvalidArgument("instance " + instance_path + ": " + e.what());
            }
            if (!j.is_object()) throw InvalidArgument("instance must be a JSON object");
            for (const auto& [k, v] : j.items()) {
                if (k != "on_rows" && k != "active_rows") throw InvalidArgument("instance: unknown key '" + k + "'");
            }
            auto inst = ChannelInstance::idle(cfg.channel);
            for (auto r : rows_field(j, "on_rows", inst.cfg.n_rows)) inst.cell_state[r] = CellState::On;
            for (auto r : rows_field(j, "active_rows", inst.cfg.n_rows)) inst.row_active[r] = 1;
            const auto sol = solve_channel(inst);
            if (as_csv) {
                emit(g, [&](std::ostream& os) {
                    csv::Writer w(os, {"row", "active", "on", "v_sl_v", "i_branch_a", "v_drop_v", "v_cell_v"});
                    for (const auto& r : ir_drop_profile(inst, sol)) {
                        w.cell(r.row).cell(r.active).cell(r.state == CellState::On).cell(r.v_sl).cell(r.i_branch)
                            .cell(r.v_drop).cell(r.v_cell);
                        w.end_row();
                    }
                });
            } else {
                json out = {{"n_rows", inst.cfg.n_rows},
                            {"i_sl_a", sol.i_sl},
                            {"node_voltages_v", sol.node_voltages},
                            {"branch_currents_a", sol.branch_currents}};
                emit(g, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
            }
        } else if (*mc) {
            const auto& s = cfg.simulation;
            analytic::ErrorModelParams p{mc_n_r.value_or(cfg.channel.n_rows), mc_f.value_or(s.f_hz),
                                         mc_t_pw.value_or(s.t_pw_s), mc_m.value_or(s.m_tol)};
            analytic::validate(p);
            const double duration = mc_duration.value_or(s.duration_s);
            const auto est = perr_monte_carlo(p, duration, s.seed, {16, g.jobs});
            json out = {{"n_r", p.n_r},
                        {"f_hz", p.f},
                        {"t_pw_s", p.t_pw},
                        {"m_tol", p.m_tol},
                        {"duration_s", duration},
                        {"seed", est.seed},
                        {"p_hat", est.p_hat},
                        {"ci_halfwidth", est.ci_halfwidth},
                        {"ci_low", est.ci_low},
                        {"ci_high", est.ci_high},
                        {"n_trials", est.n_trials},
                        {"p_analytic", analytic::perr_analytic(p)}};
            emit(g, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
        } else if (*em) {
            const auto matrix = csv::read_matrix(std::filesystem::path(matrix_path));
            ChannelConfig ch = cfg.channel;
            ch.n_rows = matrix.n_wl();
            const auto& s = cfg.simulation;
            SpikeTrainSet trains;
            if (!trains_path.empty()) {
                trains = csv::read_trains(std::filesystem::path(trains_path), matrix.n_wl(), s.t_pw_s, s.duration_s);
            } else {
                double f = s.f_hz;
                if (!poisson.empty()) {
                    if (poisson.rfind("f=", 0) != 0) throw InvalidArgument("--poisson expects f=<rate>");
                    try {
                        std::size_t used = 0;
                        f = std::stod(poisson.substr(2), &used);
                        if (used != poisson.size() - 2) throw std::invalid_argument("trailing");
                    } catch (const std::exception&) {
                        throw InvalidArgument("--poisson: cannot parse rate '" + poisson.substr(2) + "'");
                    }
                }
                trains = gen_poisson_trains(matrix.n_wl(), f, s.t_pw_s, s.duration_s, s.seed);
            }
            const RouteMode mode = mode_str.empty() ? s.mode : parse_route_mode(mode_str);
            const auto trace = emulate(matrix, trains, ch, mode, s.seed);
            emit(g, [&](std::ostream& os) { write_trace_csv(os, trace); });
            std::cerr << "events " << trace.events.size() << ", false_output " << trace.false_output
                      << ", missed_output " << trace.missed_output << '\n';
        } else if (*sw) {
            if (!sweep_preset.empty()) {
                auto res = run_preset(sweep_preset, cfg, g.out.empty() ? "." : g.out, g.jobs);
                std::cout << res.csv.string() << '\n' << res.params.string() << '\n';
            } else {
                SweepSpec spec;
                for (const auto& a : axes) spec.axes.push_back(parse_axis(a));
                spec.quantity = parse_sweep_quantity(quantity);
                spec.n_si = sweep_n_si;
                emit(g, [&](std::ostream& os) { (void)run_sweep(spec, cfg, os, g.jobs); });
            }
        } else if (*fg) {
            auto res = run_preset(fig_name, cfg, g.out.empty() ? "." : g.out, g.jobs);
            std::cout << res.csv.string() << '\n' << res.params.string() << '\n';
            if (res.params_json.contains("result")) std::cout << res.params_json["result"].dump() << '\n';
        } else if (*dr) {
            const auto rep = design_rules(dr_n.value_or(cfg.channel.n_rows), parse_pulse_regime(dr_regime),
                                          dr_p.value_or(cfg.sweep.p_target), dr_r_on.value_or(cfg.channel.device.r_on),
                                          cfg);
            emit(g, [&](std::ostream& os) { os << rep.to_json().dump(2) << '\n'; });
            if (!rep.feasible) {
                std::cerr << "infeasible: " << rep.note << '\n';
                return exit_infeasible;
            }
        } else if (*ca) {
            const double v = cal_v.value_or(cfg.channel.v_read);
            const auto c = calibrate_fet_leak(cal_total, cal_fets, v);
            json out = {{"total_leak_a", cal_total},
                        {"n_fets", cal_fets},
                        {"v_read", v},
                        {"i_leak_per_fet", c.i_leak_per_fet},
                        {"r_fet_off", std::isinf(c.r_fet_off) ? json(nullptr) : json(c.r_fet_off)}};
            emit(g, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
        }
    } catch (const UnknownPreset& e) {
        std::cerr << "error: " << e.what() << "\navailable presets:";
        for (const auto& n : preset_names()) std::cerr << ' ' << n;
        std::cerr << '\n';
        return exit_unknown_preset;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_ok;
}
