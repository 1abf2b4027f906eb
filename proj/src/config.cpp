#include "xbar/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace xbar {

using nlohmann::json;

std::string_view to_string(RouteMode m) noexcept {
    return m == RouteMode::Ideal ? "ideal" : "solver";
}

RouteMode parse_route_mode(std::string_view s) {
    if (s == "ideal") return RouteMode::Ideal;
    if (s == "solver") return RouteMode::Solver;
    throw InvalidArgument("unknown route mode '" + std::string(s) + "' (expected ideal|solver)");
}

json to_json(const AppConfig& c) {
    const auto& ch = c.channel;
    const auto& s = c.simulation;
    const auto& w = c.sweep;
    return json{
        {"channel", {{"n_rows", ch.n_rows}, {"r_line", ch.r_line}, {"v_read", ch.v_read}, {"i_ref", ch.i_ref}}},
        {"device", {{"r_on", ch.device.r_on}, {"r_off", ch.device.r_off}, {"sigma_log", ch.device.sigma_log}}},
        {"transistor", {{"r_t", ch.transistor.r_t}, {"i_leak_per_fet", ch.transistor.i_leak_per_fet}}},
        {"simulation",
         {{"f_hz", s.f_hz},
          {"t_pw_s", s.t_pw_s},
          {"duration_s", s.duration_s},
          {"m_tol", s.m_tol},
          {"seed", s.seed},
          {"mode", std::string(to_string(s.mode))}}},
        {"sweep",
         {{"n_rows", w.n_rows},
          {"r_line", w.r_line},
          {"r_on", w.r_on},
          {"k", w.k},
          {"p_target", w.p_target},
          {"k_max", w.k_max}}},
    };
}

namespace {

class SectionReader {
public:
    SectionReader(const json& root, const char* name) : name_(name) {
        auto it = root.find(name);
        if (it == root.end()) return;
        if (!it->is_object()) throw InvalidArgument(std::string("config: '") + name + "' must be an object");
        obj_ = &*it;
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!obj_) return;
        auto it = obj_->find(key);
        if (it == obj_->end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception& e) {
            throw InvalidArgument(std::string("config: ") + name_ + "." + key + ": " + e.what());
        }
    }

    void reject_unknown() const {
        if (!obj_) return;
        for (const auto& [k, v] : obj_->items()) {
            if (!seen_.count(k)) throw InvalidArgument(std::string("config: unknown key ") + name_ + "." + k);
        }
    }

private:
    const char* name_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

}  // namespace

AppConfig from_json(const json& j) {
    if (!j.is_object()) throw InvalidArgument("config: top level must be an object");
    static const std::set<std::string> sections{"channel", "device", "transistor", "simulation", "sweep"};
    for (const auto& [k, v] : j.items()) {
        if (!sections.count(k)) throw InvalidArgument("config: unknown section '" + k + "'");
    }

    AppConfig c;
    auto& ch = c.channel;
    {
        SectionReader r(j, "channel");
        r.read("n_rows", ch.n_rows);
        r.read("r_line", ch.r_line);
        r.read("v_read", ch.v_read);
        r.read("i_ref", ch.i_ref);
        r.reject_unknown();
    }
    {
        SectionReader r(j, "device");
        r.read("r_on", ch.device.r_on);
        r.read("r_off", ch.device.r_off);
        r.read("sigma_log", ch.device.sigma_log);
        r.reject_unknown();
    }
    {
        SectionReader r(j, "transistor");
        r.read("r_t", ch.transistor.r_t);
        r.read("i_leak_per_fet", ch.transistor.i_leak_per_fet);
        r.reject_unknown();
    }
    {
        SectionReader r(j, "simulation");
        auto& s = c.simulation;
        r.read("f_hz", s.f_hz);
        r.read("t_pw_s", s.t_pw_s);
        r.read("duration_s", s.duration_s);
        r.read("m_tol", s.m_tol);
        r.read("seed", s.seed);
        std::string mode(to_string(s.mode));
        r.read("mode", mode);
        s.mode = parse_route_mode(mode);
        r.reject_unknown();
    }
    {
        SectionReader r(j, "sweep");
        auto& w = c.sweep;
        r.read("n_rows", w.n_rows);
        r.read("r_line", w.r_line);
        r.read("r_on", w.r_on);
        r.read("k", w.k);
        r.read("p_target", w.p_target);
        r.read("k_max", w.k_max);
        r.reject_unknown();
    }
    return c;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("config " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

void apply_override(json& doc, std::string_view assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw InvalidArgument("override must look like key=value: '" + std::string(assignment) + "'");
    std::string key(assignment.substr(0, eq));
    std::string raw(assignment.substr(eq + 1));

    std::string pointer;
    for (char ch : key) pointer += ch == '.' ? '/' : ch;
    json::json_pointer ptr("/" + pointer);
    if (!doc.contains(ptr)) throw InvalidArgument("override: unknown config path '" + key + "'");

    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    doc[ptr] = value;
}

std::vector<Violation> validate_app_config(const AppConfig& c) {
    auto out = validate_config(c.channel);
    const auto& s = c.simulation;
    if (!std::isfinite(s.f_hz) || s.f_hz < 0.0) out.push_back({"simulation.f_hz", "rate must be >= 0"});
    if (!std::isfinite(s.t_pw_s) || s.t_pw_s <= 0.0) out.push_back({"simulation.t_pw_s", "pulse width must be > 0"});
    if (!std::isfinite(s.duration_s) || s.duration_s <= 0.0)
        out.push_back({"simulation.duration_s", "duration must be > 0"});
    if (s.m_tol < 1) out.push_back({"simulation.m_tol", "tolerance count must be >= 1"});

    const auto& w = c.sweep;
    if (!(w.p_target > 0.0 && w.p_target < 1.0)) out.push_back({"sweep.p_target", "must lie in (0, 1)"});
    if (!(w.k_max > 1.0)) out.push_back({"sweep.k_max", "must exceed 1"});
    return out;
}

}  // namespace xbar
