#pragma once

// JSON configuration document:
//
//   {
//     "channel":    { "n_rows", "r_line", "v_read", "i_ref" },
//     "device":     { "r_on", "r_off", "sigma_log" },
//     "transistor": { "r_t", "i_leak_per_fet" },
//     "simulation": { "f_hz", "t_pw_s", "duration_s", "m_tol", "seed", "mode" },
//     "sweep":      { "n_rows", "r_line", "r_on", "k", "p_target", "k_max" }
//   }
//
// Missing keys keep their defaults. Unknown keys are rejected so that typos in
// a --set path surface as errors instead of silently doing nothing.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xbar/types.hpp"

namespace xbar {

enum class RouteMode { Ideal, Solver };

[[nodiscard]] std::string_view to_string(RouteMode m) noexcept;
[[nodiscard]] RouteMode parse_route_mode(std::string_view s);

struct SimulationParams {
    double f_hz = 732.0;
    double t_pw_s = 1e-6;
    double duration_s = 1.0;
    unsigned m_tol = 20;
    std::uint64_t seed = 1;
    RouteMode mode = RouteMode::Solver;

    bool operator==(const SimulationParams&) const = default;
};

struct SweepParams {
    std::vector<std::size_t> n_rows{64, 128, 256, 512, 1024, 2048, 4096};
    std::vector<double> r_line{0.1, 1.0, 2.5, 10.0};
    std::vector<double> r_on{10e3, 50e3, 100e3};
    std::vector<double> k{10.0, 20.0, 100.0};
    double p_target = 1e-10;
    /// Largest on/off ratio a device technology can deliver; design-rule
    /// queries needing more are reported infeasible.
    double k_max = 1000.0;

    bool operator==(const SweepParams&) const = default;
};

struct AppConfig {
    ChannelConfig channel;
    SimulationParams simulation;
    SweepParams sweep;

    bool operator==(const AppConfig&) const = default;
};

[[nodiscard]] nlohmann::json to_json(const AppConfig& cfg);
/// Throws InvalidArgument on unknown keys or wrong value types.
[[nodiscard]] AppConfig from_json(const nlohmann::json& j);

[[nodiscard]] AppConfig load_config(const std::filesystem::path& path);

/// Applies `key=value` where key is a dotted path such as `device.r_off`.
/// The value is parsed as JSON when possible (numbers, arrays, booleans),
/// otherwise taken as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Channel violations plus simulation/sweep parameter checks.
[[nodiscard]] std::vector<Violation> validate_app_config(const AppConfig& cfg);

}  // namespace xbar
