#include "xbar/analytic.hpp"

#include <cmath>
#include <limits>

#include "xbar/kernels.hpp"

namespace xbar::analytic {

namespace {

void require_valid(const ChannelConfig& cfg) {
    auto v = validate_config(cfg);
    if (!v.empty()) throw InvalidArgument("invalid channel config: " + v.front().field + ": " + v.front().message);
}

double parasitic_series(const ChannelConfig& cfg) noexcept {
    return cfg.transistor.r_t + cfg.line_resistance();
}

}  // namespace

double i_sl_single_on(const ChannelConfig& cfg) {
    require_valid(cfg);
    return cfg.v_read / (cfg.device.r_on + parasitic_series(cfg));
}

double effective_ratio(double k, double r_on, double series) noexcept {
    return (k - 1.0) / (1.0 + series / r_on) + 1.0;
}

MarginReport effective_onoff_ratio(const ChannelConfig& cfg) {
    require_valid(cfg);
    MarginReport m;
    m.k = cfg.device.k();
    m.k_eff = effective_ratio(m.k, cfg.device.r_on, parasitic_series(cfg));
    m.margin_fraction = m.k_eff / m.k;
    return m;
}

DeviceRequirement required_device_ratio(double k_eff_target, const ChannelConfig& cfg) {
    if (!(k_eff_target > 1.0) || !std::isfinite(k_eff_target))
        throw InvalidArgument("required_device_ratio: k_eff target must be a finite value > 1");
    if (!(cfg.device.r_on > 0.0)) throw InvalidArgument("required_device_ratio: r_on must be > 0");
    DeviceRequirement req;
    req.k = (k_eff_target - 1.0) * (1.0 + parasitic_series(cfg) / cfg.device.r_on) + 1.0;
    req.r_off_min = req.k * cfg.device.r_on;
    return req;
}

double i_sl_two_active(const ChannelConfig& cfg, std::size_t i, std::size_t j, CellState state_j) {
    require_valid(cfg);
    if (i < 1 || !(i < j) || j > cfg.n_rows)
        throw InvalidArgument("i_sl_two_active: need 1 <= i < j <= n_rows");
    const double r = cfg.r_line;
    const double r_t = cfg.transistor.r_t;
    const double between = static_cast<double>(j - i) * r;
    const double near_branch = cfg.device.r_on + r_t + between;
    const double far_branch = between + cfg.device.resistance(state_j) + r_t;
    const double parallel = near_branch * far_branch / (near_branch + far_branch);
    const double shared = static_cast<double>(i) * r + static_cast<double>(cfg.n_rows - j) * r;
    return cfg.v_read / (shared + parallel);
}

void validate(const ErrorModelParams& p) {
    if (p.n_r < 1) throw InvalidArgument("error model: n_r must be >= 1");
    if (!std::isfinite(p.f) || p.f < 0.0) throw InvalidArgument("error model: f must be >= 0");
    if (!std::isfinite(p.t_pw) || p.t_pw <= 0.0) throw InvalidArgument("error model: t_pw must be > 0");
    if (p.m_tol < 1) throw InvalidArgument("error model: m_tol must be >= 1");
}

double log_poisson_upper_tail(double lambda, unsigned m) {
    if (m == 0) return 0.0;
    if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();

    const double log_lambda = std::log(lambda);
    auto log_term = [&](double k) { return -lambda + k * log_lambda - std::lgamma(k + 1.0); };
    constexpr double negligible = 1e-17;
    const double md = static_cast<double>(m);

    if (md > lambda) {
        // Terms shrink monotonically from k = m; sum them relative to the first.
        double term = 1.0;
        double sum = 1.0;
        for (double k = md + 1.0;; k += 1.0) {
            term *= lambda / k;
            sum += term;
            if (term < sum * negligible) break;
        }
        return log_term(md) + std::log(sum);
    }

    // m <= lambda: the tail is at least ~1/2, so 1 - P(N < m) is well conditioned.
    // Lower terms grow toward k = m - 1; sum downward relative to that one.
    double term = 1.0;
    double sum = 1.0;
    for (double k = md - 1.0; k > 0.0; k -= 1.0) {
        term *= k / lambda;
        sum += term;
        if (term < sum * negligible) break;
    }
    const double log_lower = log_term(md - 1.0) + std::log(sum);
    return std::log(-std::expm1(log_lower));
}

double perr_analytic(const ErrorModelParams& p) {
    validate(p);
    return std::exp(log_poisson_upper_tail(p.lambda(), p.m_tol));
}

unsigned min_tolerance_for_perr(std::size_t n_r, double f, double t_pw, double p_target) {
    if (!(p_target > 0.0 && p_target < 1.0)) throw InvalidArgument("min_tolerance_for_perr: p_target must lie in (0, 1)");
    ErrorModelParams p{n_r, f, t_pw, 1};
    validate(p);
    const double log_target = std::log(p_target);
    auto ok = [&](unsigned m) { return log_poisson_upper_tail(p.lambda(), m) < log_target; };

    if (ok(1)) return 1;
    constexpr unsigned cap = 1u << 30;
    unsigned lo = 1;  // fails
    unsigned hi = 2;
    while (!ok(hi)) {
        lo = hi;
        if (hi >= cap) throw InvalidArgument("min_tolerance_for_perr: no tolerance below 2^30 reaches the target");
        hi *= 2;
    }
    while (hi - lo > 1) {
        unsigned mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

void evaluate_margins(std::span<MarginPoint> points) {
    const std::size_t n = points.size();
    std::vector<double> k(n), r_on(n), series(n), k_eff(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = points[i];
        k[i] = p.r_off / p.r_on;
        r_on[i] = p.r_on;
        series[i] = p.r_t + static_cast<double>(p.n_rows) * p.r_line;
    }
    kernels::dispatch().effective_ratio(k.data(), r_on.data(), series.data(), k_eff.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i].report = {k[i], k_eff[i], k_eff[i] / k[i]};
    }
}

std::vector<MarginPoint> margin_sweep(const ChannelConfig& tmpl, std::span<const std::size_t> n_rows,
                                      std::span<const double> r_line) {
    std::vector<std::size_t> rows(n_rows.begin(), n_rows.end());
    std::vector<double> lines(r_line.begin(), r_line.end());
    if (rows.empty()) rows.push_back(tmpl.n_rows);
    if (lines.empty()) lines.push_back(tmpl.r_line);

    std::vector<MarginPoint> out;
    out.reserve(rows.size() * lines.size());
    for (std::size_t n : rows) {
        for (double r : lines) {
            ChannelConfig c = tmpl;
            c.n_rows = n;
            c.r_line = r;
            require_valid(c);
            out.push_back({n, r, c.device.r_on, c.device.r_off, c.transistor.r_t, {}});
        }
    }
    evaluate_margins(out);
    return out;
}

}  // namespace xbar::analytic
