#pragma once

// Dense modified nodal analysis, used to cross-check the ladder solver.
// Builds every node explicitly and solves by Gaussian elimination with
// partial pivoting in extended precision. Cost is cubic in the node count;
// keep networks small.

#include <cstddef>
#include <vector>

#include "xbar/channel.hpp"

namespace xbar {

/// Resistor network with ideal voltage sources. Node 0 is ground.
class DenseNetwork {
public:
    using Node = std::size_t;
    static constexpr Node ground = 0;

    Node add_node();
    [[nodiscard]] std::size_t node_count() const noexcept { return n_nodes_; }

    /// A zero resistance is stamped as a 0 V source (an ideal short).
    void add_resistor(Node a, Node b, double ohms);
    /// Ideal source holding v(pos) - v(neg) = volts. Returns its index.
    std::size_t add_source(Node pos, Node neg, double volts);

    struct Solution {
        std::vector<double> voltage;         ///< indexed by node, [0] = 0
        std::vector<double> source_current;  ///< current leaving each source's + terminal into the network
    };

    /// Throws InvalidArgument if the system is singular (e.g. floating nodes).
    [[nodiscard]] Solution solve() const;

private:
    struct Resistor { Node a, b; double ohms; };
    struct Source { Node pos, neg; double volts; };
    std::size_t n_nodes_ = 1;
    std::vector<Resistor> resistors_;
    std::vector<Source> sources_;
};

inline constexpr std::size_t dense_oracle_max_rows = 256;

/// Same channel as solve_channel, with explicit nodes between each branch's
/// lumped line resistance, its cell and its FET. I_SL is taken from the
/// read-voltage source current, not from a sum of branch currents.
/// Throws InvalidArgument when n_rows exceeds dense_oracle_max_rows.
[[nodiscard]] ChannelSolution dense_oracle_solve(const ChannelInstance& inst);

}  // namespace xbar
