#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "xbar/types.hpp"

using namespace xbar;

TEST(ValidateConfig, DefaultsAreValid) {
    ChannelConfig c;
    c.device.r_on = 10e3;
    c.device.r_off = 200e3;
    c.n_rows = 1024;
    c.r_line = 2.5;
    c.v_read = 0.2;
    EXPECT_TRUE(validate_config(c).empty());
}

TEST(ValidateConfig, RatioAtOneIsOneViolation) {
    ChannelConfig c;
    c.device.r_off = c.device.r_on;
    auto v = validate_config(c);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "device.r_off");
    EXPECT_NE(v[0].message.find("k must exceed 1"), std::string::npos);
}

TEST(ValidateConfig, EmptyChannel) {
    ChannelConfig c;
    c.n_rows = 0;
    auto v = validate_config(c);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "channel.n_rows");
}

TEST(ValidateConfig, ReportsEveryViolation) {
    ChannelConfig c;
    c.r_line = -1;
    c.v_read = 0;
    c.i_ref = -1;
    c.device.sigma_log = -0.1;
    c.transistor.r_t = -1;
    c.transistor.i_leak_per_fet = -1;
    EXPECT_EQ(validate_config(c).size(), 6u);
}

// Any finite (or non-finite) numbers: returns, never throws.
TEST(ValidateConfig, TotalOnArbitraryInputs) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    const double odd[] = {0.0, -0.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::denorm_min(), -1e308};
    for (int i = 0; i < 2000; ++i) {
        ChannelConfig c;
        auto pick = [&] { return (rng() % 4 == 0) ? odd[rng() % 6] : u(rng); };
        c.n_rows = rng() % 3;
        c.r_line = pick();
        c.v_read = pick();
        c.i_ref = pick();
        c.device.r_on = pick();
        c.device.r_off = pick();
        c.device.sigma_log = pick();
        c.transistor.r_t = pick();
        c.transistor.i_leak_per_fet = pick();
        EXPECT_NO_THROW((void)validate_config(c));
    }
}

TEST(ChannelConfig, FetOffResistance) {
    ChannelConfig c;
    c.transistor.i_leak_per_fet = 10e-9 / 256;
    EXPECT_NEAR(c.fet_off_resistance(), 5.12e9, 1e-3);
    c.transistor.i_leak_per_fet = 0;
    EXPECT_TRUE(std::isinf(c.fet_off_resistance()));
}

TEST(SwitchMatrix, SetAndColumn) {
    SwitchMatrix m(3, 2);
    m.set(1, 1, CellState::On);
    EXPECT_EQ(m.at(1, 1), CellState::On);
    EXPECT_EQ(m.at(0, 1), CellState::Off);
    auto col = m.column(1);
    EXPECT_EQ(col, (std::vector<CellState>{CellState::Off, CellState::On, CellState::Off}));
    EXPECT_THROW((void)m.at(3, 0), InvalidArgument);
    EXPECT_THROW(SwitchMatrix(0, 4), InvalidArgument);
}

TEST(SpikeTrainSet, Validate) {
    SpikeTrainSet s{2, {{0.0, 2e-6}, {}}, 1e-6, 1e-5};
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.total_pulses(), 2u);
    s.pulses[0] = {2e-6, 2e-6};
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.pulses[0] = {9.5e-6};
    EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(CellResistances, NominalWithoutSpread) {
    SwitchMatrix m(2, 2);
    m.set(0, 1, CellState::On);
    DeviceParams d;
    auto r = cell_resistances(m, d, 1);
    EXPECT_EQ(r, (std::vector<double>{d.r_off, d.r_on, d.r_off, d.r_off}));
}

TEST(CellResistances, LognormalSpreadIsSeeded) {
    SwitchMatrix m(64, 64);
    DeviceParams d;
    d.sigma_log = 0.2;
    auto a = cell_resistances(m, d, 5);
    EXPECT_EQ(a, cell_resistances(m, d, 5));
    EXPECT_NE(a, cell_resistances(m, d, 6));
    double mean_log = 0;
    for (double x : a) mean_log += std::log(x / d.r_off);
    mean_log /= static_cast<double>(a.size());
    EXPECT_NEAR(mean_log, 0.0, 4 * 0.2 / 64.0);
}

TEST(DeriveSeed, DistinctStreams) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}
