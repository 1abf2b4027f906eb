#include "xbar/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace xbar {

DenseNetwork::Node DenseNetwork::add_node() { return n_nodes_++; }

void DenseNetwork::add_resistor(Node a, Node b, double ohms) {
    if (a >= n_nodes_ || b >= n_nodes_) throw InvalidArgument("dense network: unknown node");
    if (!(ohms >= 0.0) || std::isinf(ohms)) throw InvalidArgument("dense network: resistance must be finite and >= 0");
    if (ohms == 0.0) {
        add_source(a, b, 0.0);
        return;
    }
    resistors_.push_back({a, b, ohms});
}

std::size_t DenseNetwork::add_source(Node pos, Node neg, double volts) {
    if (pos >= n_nodes_ || neg >= n_nodes_) throw InvalidArgument("dense network: unknown node");
    sources_.push_back({pos, neg, volts});
    return sources_.size() - 1;
}

DenseNetwork::Solution DenseNetwork::solve() const {
    // Unknowns: node voltages 1..n-1, then one current per source. Elimination
    // runs in extended precision: series chains of milliohm segments and
    // gigaohm leakage paths leave node voltages that differ in the 9th digit.
    using real = long double;
    const std::size_t nv = n_nodes_ - 1;
    const std::size_t dim = nv + sources_.size();
    std::vector<real> A(dim * dim, 0.0L);
    std::vector<real> rhs(dim, 0.0L);
    auto at = [&](std::size_t r, std::size_t c) -> real& { return A[r * dim + c]; };

    for (const auto& res : resistors_) {
        const real g = 1.0L / static_cast<real>(res.ohms);
        if (res.a) at(res.a - 1, res.a - 1) += g;
        if (res.b) at(res.b - 1, res.b - 1) += g;
        if (res.a && res.b) {
            at(res.a - 1, res.b - 1) -= g;
            at(res.b - 1, res.a - 1) -= g;
        }
    }
    for (std::size_t s = 0; s < sources_.size(); ++s) {
        const auto& src = sources_[s];
        const std::size_t row = nv + s;
        // Source current i_s flows out of `pos` into the network.
        if (src.pos) {
            at(src.pos - 1, row) -= 1.0L;
            at(row, src.pos - 1) += 1.0L;
        }
        if (src.neg) {
            at(src.neg - 1, row) += 1.0L;
            at(row, src.neg - 1) -= 1.0L;
        }
        rhs[row] = src.volts;
    }

    // Gaussian elimination, partial pivoting.
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r) {
            if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
        }
        if (at(piv, col) == 0.0L) throw InvalidArgument("dense network: singular system");
        if (piv != col) {
            for (std::size_t c = 0; c < dim; ++c) std::swap(at(col, c), at(piv, c));
            std::swap(rhs[col], rhs[piv]);
        }
        const real d = at(col, col);
        for (std::size_t r = col + 1; r < dim; ++r) {
            const real f = at(r, col) / d;
            if (f == 0.0L) continue;
            for (std::size_t c = col; c < dim; ++c) at(r, c) -= f * at(col, c);
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<real> x(dim);
    for (std::size_t r = dim; r-- > 0;) {
        real acc = rhs[r];
        for (std::size_t c = r + 1; c < dim; ++c) acc -= at(r, c) * x[c];
        x[r] = acc / at(r, r);
    }

    Solution sol;
    sol.voltage.assign(n_nodes_, 0.0);
    for (std::size_t i = 0; i < nv; ++i) sol.voltage[i + 1] = static_cast<double>(x[i]);
    sol.source_current.resize(sources_.size());
    for (std::size_t s = 0; s < sources_.size(); ++s) sol.source_current[s] = static_cast<double>(x[nv + s]);
    return sol;
}

ChannelSolution dense_oracle_solve(const ChannelInstance& inst) {
    inst.validate();
    const auto& cfg = inst.cfg;
    const std::size_t n = cfg.n_rows;
    if (n > dense_oracle_max_rows) throw InvalidArgument("dense_oracle_solve: n_rows exceeds the dense size guard");

    DenseNetwork net;
    const auto rail = net.add_node();
    const auto drive = net.add_source(rail, DenseNetwork::ground, cfg.v_read);

    // Source-line nodes; the last one is the sense terminal at ground.
    std::vector<DenseNetwork::Node> sl(n);
    for (std::size_t k = 0; k + 1 < n; ++k) sl[k] = net.add_node();
    sl[n - 1] = DenseNetwork::ground;
    for (std::size_t k = 0; k + 1 < n; ++k) net.add_resistor(sl[k], sl[k + 1], cfg.r_line);

    const double r_fet_off = cfg.fet_off_resistance();
    struct Branch { std::size_t row; DenseNetwork::Node wl, mid; };
    std::vector<Branch> branches;
    for (std::size_t k = 0; k < n; ++k) {
        const double fet = inst.row_active[k] ? cfg.transistor.r_t : r_fet_off;
        if (std::isinf(fet)) continue;  // open branch
        const auto wl = net.add_node();
        const auto mid = net.add_node();
        net.add_resistor(rail, wl, static_cast<double>(k + 1) * cfg.r_line);
        net.add_resistor(wl, mid, inst.cell_r(k));
        net.add_resistor(mid, sl[k], fet);
        branches.push_back({k, wl, mid});
    }

    if (branches.empty()) {
        ChannelSolution sol;
        sol.node_voltages.assign(n, 0.0);
        sol.branch_currents.assign(n, 0.0);
        return sol;
    }
    const auto dense = net.solve();

    ChannelSolution sol;
    sol.node_voltages.resize(n);
    for (std::size_t k = 0; k < n; ++k) sol.node_voltages[k] = dense.voltage[sl[k]];
    sol.branch_currents.assign(n, 0.0);
    for (const auto& b : branches) {
        const double v_cell = dense.voltage[b.wl] - dense.voltage[b.mid];
        sol.branch_currents[b.row] = v_cell / inst.cell_r(b.row);
    }
    sol.i_sl = dense.source_current[drive];
    return sol;
}

}  // namespace xbar
