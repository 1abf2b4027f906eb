#pragma once

// Parameter sweeps, figure-data presets and the design-rule chain.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xbar/config.hpp"
#include "xbar/router.hpp"

namespace xbar {

inline constexpr std::string_view margin_csv_header = "n_rows,r_line,r_on,r_off,r_t,k,k_eff,margin_fraction";
inline constexpr std::string_view error_csv_header = "n_r,f_hz,t_pw_s,m_tol,p_err";
inline constexpr std::string_view trace_csv_header = "time_s,channel,i_sl_a,fired,expected,error_class";
inline constexpr std::string_view leak_csv_header = "n_r,r_line,r_off,i_leak_per_fet,n_si,i_cc_leak_a,i_off_a,ratio";

class UnknownPreset : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

[[nodiscard]] const std::vector<std::string>& preset_names();

struct PresetResult {
    std::filesystem::path csv;
    std::filesystem::path params;
    std::size_t rows = 0;
    /// Same content as the sidecar file.
    nlohmann::json params_json;
};

/// Writes <out_dir>/<name>.csv and <out_dir>/<name>.params.json. Channel,
/// device and transistor values come from `base`; the grids are fixed per
/// preset. Output bytes depend only on the arguments, never on `jobs`.
/// Throws UnknownPreset for an unrecognized name.
PresetResult run_preset(std::string_view name, const AppConfig& base, const std::filesystem::path& out_dir,
                        unsigned jobs = 1);

/// 32x128 router with WL10 on in three channels; the other channels each
/// carry one on-cell on some other word line.
[[nodiscard]] SwitchMatrix demo_matrix();
/// Channel settings of the multicast demo and of the coincidence failure.
[[nodiscard]] ChannelConfig demo_channel(const ChannelConfig& base);
[[nodiscard]] RoutingTrace run_demo(const ChannelConfig& base);
[[nodiscard]] RoutingTrace run_coincidence_failure(const ChannelConfig& base);

void write_trace_csv(std::ostream& os, const RoutingTrace& trace);

enum class PulseRegime { Microsecond, Nanosecond };

[[nodiscard]] double pulse_width(PulseRegime r) noexcept;
[[nodiscard]] PulseRegime parse_pulse_regime(std::string_view s);

struct DesignRuleReport {
    std::size_t n_rows = 0;
    double f_hz = 0.0;
    double t_pw_s = 0.0;
    double lambda = 0.0;
    double p_target = 0.0;
    unsigned m_tol = 0;
    double p_err = 0.0;
    double k_eff_target = 0.0;
    double r_on = 0.0;
    double series_r = 0.0;  ///< R_T + n r
    double k = 0.0;
    double r_off_min = 0.0;
    double k_max = 0.0;
    bool feasible = false;
    std::string note;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// m_tol from the Poisson model, then the device ratio that keeps k_eff at
/// m_tol. Rate, line resistance and R_T come from `cfg`. Infeasible when the
/// needed k exceeds cfg.sweep.k_max.
[[nodiscard]] DesignRuleReport design_rules(std::size_t n_rows, PulseRegime regime, double p_target, double r_on,
                                            const AppConfig& cfg);

enum class SweepQuantity { Margin, Error, Leak };

[[nodiscard]] SweepQuantity parse_sweep_quantity(std::string_view s);

struct SweepAxis {
    std::string path;  ///< dotted config path, e.g. channel.n_rows
    std::vector<nlohmann::json> values;
};

/// Parses `path=v1,v2,...`.
[[nodiscard]] SweepAxis parse_axis(std::string_view spec);

struct SweepSpec {
    std::vector<SweepAxis> axes;
    SweepQuantity quantity = SweepQuantity::Margin;
    /// Simultaneous inputs for the leak quantity.
    std::size_t n_si = 10;
};

/// Cartesian product of the axes applied to `base`, first axis slowest. One
/// CSV row per grid point in grid order. Returns the number of rows.
std::size_t run_sweep(const SweepSpec& spec, const AppConfig& base, std::ostream& os, unsigned jobs = 1);

}  // namespace xbar
