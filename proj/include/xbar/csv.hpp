#pragma once

// Plain comma-separated tables. Numbers are written in shortest round-trip
// form so identical runs produce identical bytes.

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "xbar/types.hpp"

namespace xbar::csv {

[[nodiscard]] std::string fmt(double x);
[[nodiscard]] std::string fmt(std::size_t x);

class Writer {
public:
    Writer(std::ostream& os, std::initializer_list<std::string_view> header);

    Writer& cell(double x);
    Writer& cell(std::size_t x);
    Writer& cell(unsigned x) { return cell(static_cast<std::size_t>(x)); }
    Writer& cell(bool x) { return cell(static_cast<std::size_t>(x)); }
    Writer& cell(std::string_view s);
    void end_row();

private:
    void sep();

    std::ostream& os_;
    std::size_t n_cols_;
    std::size_t col_ = 0;
};

/// 0/1 grid, one line per word line. Blank lines and lines starting with '#'
/// are skipped.
[[nodiscard]] SwitchMatrix read_matrix(std::istream& is);
[[nodiscard]] SwitchMatrix read_matrix(const std::filesystem::path& path);

/// Rows of `input_index,start_s`; an optional header line is skipped. Starts
/// are sorted per input.
[[nodiscard]] SpikeTrainSet read_trains(std::istream& is, std::size_t n_inputs, double t_pw, double duration);
[[nodiscard]] SpikeTrainSet read_trains(const std::filesystem::path& path, std::size_t n_inputs, double t_pw,
                                        double duration);

}  // namespace xbar::csv
