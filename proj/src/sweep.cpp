#include "xbar/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "xbar/analytic.hpp"
#include "xbar/channel.hpp"
#include "xbar/csv.hpp"
#include "xbar/parallel.hpp"

namespace xbar {

using nlohmann::json;

namespace {

constexpr std::size_t demo_rows = 32;
constexpr std::size_t demo_channels = 128;
constexpr std::size_t demo_wl = 10;
constexpr std::size_t demo_targets[] = {3, 17, 42};

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + p.string());
    return f;
}

void write_rows(std::ostream& os, std::string_view header, const std::vector<std::string>& rows) {
    os << header << '\n';
    for (const auto& r : rows) os << r << '\n';
}

std::string join(std::initializer_list<std::string> cells) {
    std::string s;
    for (const auto& c : cells) {
        if (!s.empty()) s += ',';
        s += c;
    }
    return s;
}

std::string margin_row(const analytic::MarginPoint& p) {
    using csv::fmt;
    return join({fmt(p.n_rows), fmt(p.r_line), fmt(p.r_on), fmt(p.r_off), fmt(p.r_t), fmt(p.report.k),
                 fmt(p.report.k_eff), fmt(p.report.margin_fraction)});
}

std::string error_row(const analytic::ErrorModelParams& p) {
    using csv::fmt;
    return join({fmt(p.n_r), fmt(p.f), fmt(p.t_pw), fmt(std::size_t{p.m_tol}), fmt(analytic::perr_analytic(p))});
}

std::string leak_row(const ChannelConfig& c, std::size_t n_si) {
    using csv::fmt;
    const auto rep = i_cc_leak(c, n_si);
    return join({fmt(c.n_rows), fmt(c.r_line), fmt(c.device.r_off), fmt(c.transistor.i_leak_per_fet), fmt(n_si),
                 fmt(rep.i_cc_leak), fmt(rep.i_off_single), fmt(rep.ratio)});
}

struct Grid {
    std::string_view header;
    std::vector<std::string> rows;
    json axes;
};

Grid fig6_grid(const AppConfig&) {
    const std::vector<std::size_t> n_r{256, 1024, 4096};
    const std::vector<double> f{100.0, 250.0, 500.0, 732.0, 1000.0};
    const std::vector<double> t_pw{1e-6, 10e-9};
    constexpr unsigned m_max = 30;
    Grid g{error_csv_header, {}, {{"n_r", n_r}, {"f_hz", f}, {"t_pw_s", t_pw}, {"m_tol", {1, m_max}}}};
    for (auto n : n_r)
        for (double fi : f)
            for (double t : t_pw)
                for (unsigned m = 1; m <= m_max; ++m) g.rows.push_back(error_row({n, fi, t, m}));
    return g;
}

Grid fig8_grid(const AppConfig& base) {
    const auto& s = base.sweep;
    std::vector<analytic::MarginPoint> pts;
    for (double r_on : s.r_on)
        for (double k : s.k)
            for (auto n : s.n_rows)
                for (double r : s.r_line) pts.push_back({n, r, r_on, k * r_on, base.channel.transistor.r_t, {}});
    analytic::evaluate_margins(pts);
    Grid g{margin_csv_header, {}, {{"r_on", s.r_on}, {"k", s.k}, {"n_rows", s.n_rows}, {"r_line", s.r_line}}};
    for (const auto& p : pts) g.rows.push_back(margin_row(p));
    return g;
}

Grid leak_grid(const AppConfig& base, const std::vector<std::size_t>& n_r, const std::vector<double>& r_line,
               unsigned jobs) {
    const std::vector<double> r_off{1e5, 1e6, 1e7, 1e8, 1e9};
    const std::vector<std::size_t> n_si{1, 2, 5, 10, 20, 50, 100};
    std::vector<double> leak{0.0};
    if (base.channel.transistor.i_leak_per_fet > 0.0) leak.push_back(base.channel.transistor.i_leak_per_fet);

    std::vector<std::pair<ChannelConfig, std::size_t>> pts;
    for (auto n : n_r)
        for (double r : r_line)
            for (double ro : r_off)
                for (double l : leak)
                    for (auto s : n_si) {
                        ChannelConfig c = base.channel;
                        c.n_rows = n;
                        c.r_line = r;
                        c.device.r_off = ro;
                        c.transistor.i_leak_per_fet = l;
                        pts.emplace_back(c, s);
                    }
    Grid g{leak_csv_header,
           std::vector<std::string>(pts.size()),
           {{"n_r", n_r}, {"r_line", r_line}, {"r_off", r_off}, {"i_leak_per_fet", leak}, {"n_si", n_si}}};
    parallel_for(pts.size(), jobs, [&](std::size_t i) { g.rows[i] = leak_row(pts[i].first, pts[i].second); });
    return g;
}

void write_params(const std::filesystem::path& p, const json& j) {
    auto f = open_out(p);
    f << j.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig6", "fig8", "fig10", "fig11", "demo_fig2", "error_fig3"};
    return names;
}

SwitchMatrix demo_matrix() {
    SwitchMatrix m(demo_rows, demo_channels);
    for (std::size_t c = 0; c < demo_channels; ++c) {
        std::size_t row = (7 * c + 3) % demo_rows;
        if (row == demo_wl) row = (row + 1) % demo_rows;
        m.set(row, c, CellState::On);
    }
    for (std::size_t c : demo_targets) {
        for (std::size_t w = 0; w < demo_rows; ++w) m.set(w, c, CellState::Off);
        m.set(demo_wl, c, CellState::On);
    }
    return m;
}

ChannelConfig demo_channel(const ChannelConfig& base) {
    ChannelConfig c = base;
    c.n_rows = demo_rows;
    c.v_read = 0.2;
    c.i_ref = 6e-6;
    c.device.r_on = 10e3;
    c.device.r_off = 250e3;
    c.transistor.r_t = 1.7e3;
    return c;
}

RoutingTrace run_demo(const ChannelConfig& base) {
    SpikeTrainSet trains;
    trains.n_inputs = demo_rows;
    trains.pulses.resize(demo_rows);
    trains.t_pw = 1e-6;
    trains.duration = 4e-6;
    trains.pulses[demo_wl].push_back(1e-6);
    return emulate(demo_matrix(), trains, demo_channel(base), RouteMode::Solver);
}

RoutingTrace run_coincidence_failure(const ChannelConfig& base) {
    constexpr std::size_t n_pulses = 9;
    SpikeTrainSet trains;
    trains.n_inputs = demo_rows;
    trains.pulses.resize(demo_rows);
    trains.t_pw = 1e-6;
    trains.duration = 4e-6;
    for (std::size_t k : leak_rows(demo_rows, n_pulses, LeakPlacement::Even)) trains.pulses[k].push_back(1e-6);
    return emulate(SwitchMatrix(demo_rows, demo_channels), trains, demo_channel(base), RouteMode::Solver);
}

void write_trace_csv(std::ostream& os, const RoutingTrace& trace) {
    os << trace_csv_header << '\n';
    for (const auto& e : trace.events) {
        os << join({csv::fmt(e.time), csv::fmt(e.channel), csv::fmt(e.i_sl), e.fired ? "1" : "0",
                    e.expected ? "1" : "0", std::string(to_string(e.error))})
           << '\n';
    }
}

PresetResult run_preset(std::string_view name, const AppConfig& base, const std::filesystem::path& out_dir,
                        unsigned jobs) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw UnknownPreset("unknown preset '" + std::string(name) + "'");
    auto v = validate_app_config(base);
    if (!v.empty()) throw InvalidArgument(v.front().field + ": " + v.front().message);

    std::filesystem::create_directories(out_dir);
    PresetResult res;
    res.csv = out_dir / (std::string(name) + ".csv");
    res.params = out_dir / (std::string(name) + ".params.json");
    res.params_json = {{"preset", name}, {"config", to_json(base)}};

    if (name == "demo_fig2" || name == "error_fig3") {
        const bool demo = name == "demo_fig2";
        const auto trace = demo ? run_demo(base.channel) : run_coincidence_failure(base.channel);
        auto f = open_out(res.csv);
        write_trace_csv(f, trace);
        res.rows = trace.events.size();
        res.params_json["channel"] = to_json(AppConfig{demo_channel(base.channel), {}, {}})["channel"];
        res.params_json["device"] = to_json(AppConfig{demo_channel(base.channel), {}, {}})["device"];
        res.params_json["matrix"] = {{"n_wl", demo_rows}, {"n_ch", demo_channels}};
        if (demo) {
            res.params_json["pulses"] = {{"word_line", demo_wl}, {"start_s", 1e-6}, {"t_pw_s", 1e-6}};
            res.params_json["multicast_channels"] = demo_targets;
        } else {
            res.params_json["pulses"] = {{"word_lines", leak_rows(demo_rows, 9, LeakPlacement::Even)},
                                         {"start_s", 1e-6},
                                         {"t_pw_s", 1e-6},
                                         {"all_cells", "off"}};
        }
        res.params_json["result"] = {{"events", trace.events.size()},
                                     {"false_output", trace.false_output},
                                     {"missed_output", trace.missed_output}};
        write_params(res.params, res.params_json);
        return res;
    }

    Grid g;
    if (name == "fig6") g = fig6_grid(base);
    else if (name == "fig8") g = fig8_grid(base);
    else if (name == "fig10") g = leak_grid(base, {256}, {0.0, 0.1, 1.0, 2.5, 10.0}, jobs);
    else g = leak_grid(base, {256, 1024}, {0.0, base.channel.r_line}, jobs);

    auto f = open_out(res.csv);
    write_rows(f, g.header, g.rows);
    res.rows = g.rows.size();
    res.params_json["grid"] = g.axes;
    write_params(res.params, res.params_json);
    return res;
}

double pulse_width(PulseRegime r) noexcept { return r == PulseRegime::Microsecond ? 1e-6 : 10e-9; }

PulseRegime parse_pulse_regime(std::string_view s) {
    if (s == "us") return PulseRegime::Microsecond;
    if (s == "ns") return PulseRegime::Nanosecond;
    throw InvalidArgument("unknown pulse regime '" + std::string(s) + "' (expected us|ns)");
}

json DesignRuleReport::to_json() const {
    return {{"n_rows", n_rows},   {"f_hz", f_hz},         {"t_pw_s", t_pw_s},
            {"lambda", lambda},   {"p_target", p_target}, {"m_tol", m_tol},
            {"p_err", p_err},     {"k_eff_target", k_eff_target},
            {"r_on", r_on},       {"series_r", series_r}, {"k", k},
            {"r_off_min", r_off_min}, {"k_max", k_max},   {"feasible", feasible},
            {"note", note}};
}

DesignRuleReport design_rules(std::size_t n_rows, PulseRegime regime, double p_target, double r_on,
                              const AppConfig& cfg) {
    DesignRuleReport rep;
    rep.n_rows = n_rows;
    rep.f_hz = cfg.simulation.f_hz;
    rep.t_pw_s = pulse_width(regime);
    rep.p_target = p_target;
    rep.r_on = r_on;
    rep.k_max = cfg.sweep.k_max;

    ChannelConfig ch = cfg.channel;
    ch.n_rows = n_rows;
    ch.device.r_on = r_on;
    if (!(r_on > 0.0) || !std::isfinite(r_on)) throw InvalidArgument("design_rules: r_on must be finite and > 0");
    if (n_rows < 1) throw InvalidArgument("design_rules: n_rows must be >= 1");
    rep.series_r = ch.transistor.r_t + ch.line_resistance();

    analytic::ErrorModelParams p{n_rows, rep.f_hz, rep.t_pw_s, 1};
    rep.lambda = p.lambda();
    try {
        rep.m_tol = analytic::min_tolerance_for_perr(n_rows, rep.f_hz, rep.t_pw_s, p_target);
    } catch (const InvalidArgument&) {
        if (!(p_target > 0.0 && p_target < 1.0)) throw;
        rep.note = "no tolerance count reaches the target error probability";
        return rep;
    }
    p.m_tol = rep.m_tol;
    rep.p_err = analytic::perr_analytic(p);
    rep.k_eff_target = rep.m_tol > 1 ? static_cast<double>(rep.m_tol) : 1.0 + 1e-9;

    const auto req = analytic::required_device_ratio(rep.k_eff_target, ch);
    rep.k = req.k;
    rep.r_off_min = req.r_off_min;
    rep.feasible = rep.k <= rep.k_max;

    std::ostringstream note;
    if (rep.feasible) {
        note << "R_off >= " << csv::fmt(rep.r_off_min) << " ohm keeps k_eff at " << rep.m_tol
             << "; leave headroom above this for device spread and read noise";
    } else {
        note << "needs k = " << csv::fmt(rep.k) << ", above the device ceiling k_max = " << csv::fmt(rep.k_max)
             << "; raise R_on, shorten the channel or shorten pulses";
    }
    rep.note = note.str();
    return rep;
}

SweepQuantity parse_sweep_quantity(std::string_view s) {
    if (s == "margin") return SweepQuantity::Margin;
    if (s == "error") return SweepQuantity::Error;
    if (s == "leak") return SweepQuantity::Leak;
    throw InvalidArgument("unknown sweep quantity '" + std::string(s) + "' (expected margin|error|leak)");
}

SweepAxis parse_axis(std::string_view spec) {
    auto eq = spec.find('=');
    if (eq == std::string_view::npos || eq == 0) throw InvalidArgument("axis must look like path=v1,v2,...");
    SweepAxis ax;
    ax.path = std::string(spec.substr(0, eq));
    std::string_view rest = spec.substr(eq + 1);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string item(rest.substr(0, comma));
        json v = json::parse(item, nullptr, false);
        ax.values.push_back(v.is_discarded() ? json(item) : v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (ax.values.empty()) throw InvalidArgument("axis '" + ax.path + "' has no values");
    return ax;
}

std::size_t run_sweep(const SweepSpec& spec, const AppConfig& base, std::ostream& os, unsigned jobs) {
    if (spec.axes.empty()) throw InvalidArgument("sweep needs at least one axis");
    std::size_t total = 1;
    for (const auto& ax : spec.axes) {
        if (ax.values.empty()) throw InvalidArgument("axis '" + ax.path + "' has no values");
        total *= ax.values.size();
    }

    const json doc = to_json(base);
    std::vector<AppConfig> cfgs(total);
    for (std::size_t i = 0; i < total; ++i) {
        json d = doc;
        std::size_t rem = i;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& ax = spec.axes[a];
            std::string ptr = "/" + ax.path;
            for (char& c : ptr) c = c == '.' ? '/' : c;
            json::json_pointer jp(ptr);
            if (!d.contains(jp)) throw InvalidArgument("sweep: unknown config path '" + ax.path + "'");
            d[jp] = ax.values[rem % ax.values.size()];
            rem /= ax.values.size();
        }
        cfgs[i] = from_json(d);
        auto v = validate_app_config(cfgs[i]);
        if (!v.empty()) throw InvalidArgument("sweep point " + std::to_string(i) + ": " + v.front().field + ": " +
                                              v.front().message);
    }

    std::vector<std::string> rows(total);
    std::string_view header;
    switch (spec.quantity) {
        case SweepQuantity::Margin: {
            header = margin_csv_header;
            std::vector<analytic::MarginPoint> pts;
            for (const auto& c : cfgs) {
                const auto& ch = c.channel;
                pts.push_back({ch.n_rows, ch.r_line, ch.device.r_on, ch.device.r_off, ch.transistor.r_t, {}});
            }
            analytic::evaluate_margins(pts);
            for (std::size_t i = 0; i < total; ++i) rows[i] = margin_row(pts[i]);
            break;
        }
        case SweepQuantity::Error:
            header = error_csv_header;
            parallel_for(total, jobs, [&](std::size_t i) {
                const auto& c = cfgs[i];
                rows[i] = error_row({c.channel.n_rows, c.simulation.f_hz, c.simulation.t_pw_s, c.simulation.m_tol});
            });
            break;
        case SweepQuantity::Leak:
            header = leak_csv_header;
            parallel_for(total, jobs, [&](std::size_t i) { rows[i] = leak_row(cfgs[i].channel, spec.n_si); });
            break;
    }
    write_rows(os, header, rows);
    return total;
}

}  // namespace xbar
