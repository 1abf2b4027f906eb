#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xbar/csv.hpp"
#include "xbar/sweep.hpp"

using namespace xbar;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("xbar_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Csv, ShortestRoundTrip) {
    for (double x : {0.1, 1e-10, 6.314239092357741e-22, 14.323983169705471, 1024.0}) {
        EXPECT_EQ(std::stod(csv::fmt(x)), x);
    }
    EXPECT_EQ(csv::fmt(2.5), "2.5");
}

TEST(Csv, ReadMatrix) {
    std::istringstream is("# demo\n0,1,0\n1,0,0\n\n");
    auto m = csv::read_matrix(is);
    EXPECT_EQ(m.n_wl(), 2u);
    EXPECT_EQ(m.n_ch(), 3u);
    EXPECT_EQ(m.at(0, 1), CellState::On);
    std::istringstream bad("0,1\n1\n");
    EXPECT_THROW((void)csv::read_matrix(bad), InvalidArgument);
    std::istringstream bad2("0,2\n");
    EXPECT_THROW((void)csv::read_matrix(bad2), InvalidArgument);
}

TEST(Csv, ReadTrains) {
    std::istringstream is("input_index,start_s\n1,3e-6\n0,1e-6\n1,1e-6\n");
    auto s = csv::read_trains(is, 2, 1e-6, 1e-5);
    EXPECT_EQ(s.pulses[0], std::vector<double>{1e-6});
    EXPECT_EQ(s.pulses[1], (std::vector<double>{1e-6, 3e-6}));
    std::istringstream oob("5,1e-6\n");
    EXPECT_THROW((void)csv::read_trains(oob, 2, 1e-6, 1e-5), InvalidArgument);
}

TEST(Presets, HeadersAndSidecars) {
    const auto dir = scratch("headers");
    const std::pair<const char*, std::string_view> expect[] = {
        {"fig6", error_csv_header},  {"fig8", margin_csv_header},     {"fig10", leak_csv_header},
        {"fig11", leak_csv_header},  {"demo_fig2", trace_csv_header}, {"error_fig3", trace_csv_header},
    };
    for (const auto& [name, header] : expect) {
        auto res = run_preset(name, AppConfig{}, dir);
        auto rows = parse_csv(slurp(res.csv));
        ASSERT_FALSE(rows.empty());
        std::string h;
        std::getline(std::istringstream(slurp(res.csv)) >> std::ws, h);
        EXPECT_EQ(h, header) << name;
        EXPECT_EQ(rows.size(), res.rows + 1) << name;
        auto j = nlohmann::json::parse(slurp(res.params));
        EXPECT_EQ(j["preset"], name);
        EXPECT_TRUE(j.contains("config"));
    }
    fs::remove_all(dir);
}

TEST(Presets, ByteReproducible) {
    const auto a = scratch("repro_a"), b = scratch("repro_b");
    for (const auto& name : preset_names()) {
        auto ra = run_preset(name, AppConfig{}, a, 1);
        auto rb = run_preset(name, AppConfig{}, b, 3);
        EXPECT_EQ(slurp(ra.csv), slurp(rb.csv)) << name;
        EXPECT_EQ(slurp(ra.params), slurp(rb.params)) << name;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Presets, Unknown) {
    EXPECT_THROW((void)run_preset("fig99", AppConfig{}, scratch("unknown")), UnknownPreset);
}

TEST(Presets, Fig8GridAndMonotone) {
    const auto dir = scratch("fig8");
    auto res = run_preset("fig8", AppConfig{}, dir);
    auto rows = parse_csv(slurp(res.csv));
    const AppConfig c;
    const std::size_t nn = c.sweep.n_rows.size(), nr = c.sweep.r_line.size();
    ASSERT_EQ(rows.size() - 1, c.sweep.r_on.size() * c.sweep.k.size() * nn * nr);
    for (std::size_t block = 0; block < c.sweep.r_on.size() * c.sweep.k.size(); ++block) {
        for (std::size_t a = 0; a < nn; ++a) {
            for (std::size_t b = 0; b < nr; ++b) {
                const auto& row = rows[1 + block * nn * nr + a * nr + b];
                EXPECT_EQ(std::stoul(row[0]), c.sweep.n_rows[a]);
                EXPECT_EQ(std::stod(row[1]), c.sweep.r_line[b]);
                const double mf = std::stod(row[7]);
                if (a > 0) {
                    EXPECT_LT(mf, std::stod(rows[1 + block * nn * nr + (a - 1) * nr + b][7]));
                }
                if (b > 0) {
                    EXPECT_LT(mf, std::stod(rows[1 + block * nn * nr + a * nr + b - 1][7]));
                }
            }
        }
    }
    fs::remove_all(dir);
}

TEST(Presets, Fig11LeakRatioAtAnchor) {
    const auto dir = scratch("fig11");
    auto res = run_preset("fig11", AppConfig{}, dir);
    bool found = false;
    auto rows = parse_csv(slurp(res.csv));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row[0] == "1024" && std::stod(row[1]) == 2.5 && std::stod(row[2]) == 1e7 && std::stod(row[3]) > 0 &&
            row[4] == "10") {
            EXPECT_LT(std::stod(row[7]), 5.0);
            EXPECT_NEAR(std::stod(row[7]), 4.0, 0.1);
            found = true;
        }
    }
    EXPECT_TRUE(found);
    fs::remove_all(dir);
}

TEST(Presets, ErrorFig3ReportsFalseOutputs) {
    const auto dir = scratch("fig3");
    auto res = run_preset("error_fig3", AppConfig{}, dir);
    EXPECT_GE(res.params_json["result"]["false_output"].get<std::size_t>(), 1u);
    EXPECT_EQ(res.params_json["result"]["missed_output"].get<std::size_t>(), 0u);
    fs::remove_all(dir);
}

TEST(DesignRules, DefaultChannel) {
    AppConfig c;
    auto r = design_rules(1024, PulseRegime::Microsecond, 1e-10, 10e3, c);
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.m_tol, 12u);
    EXPECT_LT(r.p_err, 1e-10);
    EXPECT_GE(r.r_off_min, 138e3);
    EXPECT_LE(r.r_off_min, 200e3);
    EXPECT_DOUBLE_EQ(r.k, 11 * (1 + 4260.0 / 10e3) + 1);
}

TEST(DesignRules, LargeOnResistanceLimit) {
    AppConfig c;
    auto r = design_rules(1024, PulseRegime::Microsecond, 1e-10, 1e12, c);
    EXPECT_NEAR(r.k, r.m_tol, 1e-6);
}

TEST(DesignRules, LightTrafficBoundary) {
    AppConfig c;
    c.simulation.f_hz = 1;
    auto r = design_rules(16, PulseRegime::Nanosecond, 0.5, 10e3, c);
    EXPECT_EQ(r.m_tol, 1u);
    EXPECT_GT(r.k_eff_target, 1.0);
    EXPECT_LT(r.k, 1.0 + 1e-8);
    EXPECT_TRUE(r.feasible);
}

TEST(DesignRules, Infeasible) {
    AppConfig c;
    c.sweep.k_max = 15;
    auto r = design_rules(4096, PulseRegime::Microsecond, 1e-10, 10e3, c);
    EXPECT_FALSE(r.feasible);
    EXPECT_FALSE(r.note.empty());
}

TEST(Sweep, GridOrderAndValues) {
    SweepSpec spec;
    spec.axes = {parse_axis("channel.n_rows=64,128"), parse_axis("channel.r_line=0,2.5,10")};
    std::ostringstream a, b;
    EXPECT_EQ(run_sweep(spec, AppConfig{}, a, 1), 6u);
    run_sweep(spec, AppConfig{}, b, 4);
    EXPECT_EQ(a.str(), b.str());
    auto rows = parse_csv(a.str());
    EXPECT_EQ(rows[1][0], "64");
    EXPECT_EQ(rows[1][1], "0");
    EXPECT_EQ(rows[3][1], "10");
    EXPECT_EQ(rows[4][0], "128");
}

TEST(Sweep, ErrorAndLeakQuantities) {
    SweepSpec spec;
    spec.axes = {parse_axis("simulation.m_tol=1,5,20")};
    spec.quantity = SweepQuantity::Error;
    std::ostringstream os;
    run_sweep(spec, AppConfig{}, os);
    EXPECT_EQ(parse_csv(os.str())[0].size(), 5u);
    spec.axes = {parse_axis("device.r_off=1e6,1e7")};
    spec.quantity = SweepQuantity::Leak;
    std::ostringstream ls;
    run_sweep(spec, AppConfig{}, ls);
    EXPECT_EQ(parse_csv(ls.str()).size(), 3u);
}

TEST(Sweep, BadAxes) {
    SweepSpec spec;
    std::ostringstream os;
    EXPECT_THROW(run_sweep(spec, AppConfig{}, os), InvalidArgument);
    spec.axes = {parse_axis("device.nope=1")};
    EXPECT_THROW(run_sweep(spec, AppConfig{}, os), InvalidArgument);
    spec.axes = {parse_axis("device.r_off=5")};
    EXPECT_THROW(run_sweep(spec, AppConfig{}, os), InvalidArgument);
    EXPECT_THROW((void)parse_axis("novalue"), InvalidArgument);
}
