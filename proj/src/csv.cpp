#include "xbar/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace xbar::csv {

std::string fmt(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw InvalidArgument("csv: cannot format number");
    return std::string(buf, end);
}

std::string fmt(std::size_t x) { return std::to_string(x); }

Writer::Writer(std::ostream& os, std::initializer_list<std::string_view> header) : os_(os), n_cols_(header.size()) {
    bool first = true;
    for (auto h : header) {
        if (!first) os_ << ',';
        os_ << h;
        first = false;
    }
    os_ << '\n';
}

void Writer::sep() {
    if (col_ == n_cols_) throw InvalidArgument("csv: too many cells in row");
    if (col_++ > 0) os_ << ',';
}

Writer& Writer::cell(double x) {
    sep();
    os_ << fmt(x);
    return *this;
}

Writer& Writer::cell(std::size_t x) {
    sep();
    os_ << x;
    return *this;
}

Writer& Writer::cell(std::string_view s) {
    sep();
    os_ << s;
    return *this;
}

void Writer::end_row() {
    if (col_ != n_cols_) throw InvalidArgument("csv: row has wrong number of cells");
    os_ << '\n';
    col_ = 0;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    for (;;) {
        auto pos = line.find(',');
        out.push_back(trim(line.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return out;
}

template <typename T>
bool parse(std::string_view s, T& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot open " + path.string());
    return f;
}

}  // namespace

SwitchMatrix read_matrix(std::istream& is) {
    std::vector<std::vector<CellState>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<CellState> row;
        for (auto f : split(t)) {
            if (f == "1") row.push_back(CellState::On);
            else if (f == "0") row.push_back(CellState::Off);
            else throw InvalidArgument("matrix csv line " + std::to_string(lineno) + ": expected 0 or 1");
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidArgument("matrix csv line " + std::to_string(lineno) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidArgument("matrix csv: no rows");
    SwitchMatrix m(rows.size(), rows.front().size());
    for (std::size_t w = 0; w < rows.size(); ++w)
        for (std::size_t c = 0; c < rows[w].size(); ++c) m.set(w, c, rows[w][c]);
    return m;
}

SwitchMatrix read_matrix(const std::filesystem::path& path) {
    auto f = open(path);
    return read_matrix(f);
}

SpikeTrainSet read_trains(std::istream& is, std::size_t n_inputs, double t_pw, double duration) {
    SpikeTrainSet set;
    set.n_inputs = n_inputs;
    set.t_pw = t_pw;
    set.duration = duration;
    set.pulses.resize(n_inputs);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto f = split(t);
        std::size_t idx = 0;
        double start = 0.0;
        if (f.size() != 2 || !parse(f[0], idx) || !parse(f[1], start)) {
            if (lineno == 1) continue;  // header
            throw InvalidArgument("trains csv line " + std::to_string(lineno) + ": expected input_index,start_s");
        }
        if (idx >= n_inputs)
            throw InvalidArgument("trains csv line " + std::to_string(lineno) + ": input index out of range");
        set.pulses[idx].push_back(start);
    }
    for (auto& p : set.pulses) std::sort(p.begin(), p.end());
    set.validate();
    return set;
}

SpikeTrainSet read_trains(const std::filesystem::path& path, std::size_t n_inputs, double t_pw, double duration) {
    auto f = open(path);
    return read_trains(f, n_inputs, t_pw, duration);
}

}  // namespace xbar::csv
