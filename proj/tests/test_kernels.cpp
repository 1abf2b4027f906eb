#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "xbar/kernels.hpp"

using namespace xbar::kernels;

namespace {

std::vector<Isa> simd_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::Avx2, Isa::Neon})
        if (isa_available(isa)) out.push_back(isa);
    return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
    EXPECT_TRUE(isa_available(Isa::Scalar));
    EXPECT_EQ(isa_name(Isa::Scalar), "scalar");
    EXPECT_EQ(&table(active_isa()), &dispatch());
}

TEST(Kernels, EffectiveRatioBitExact) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
        std::vector<double> k(n), r_on(n), s(n), ref(n), got(n);
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = 1.0 + 1e3 * u(rng);
            r_on[i] = 1e3 + 1e5 * u(rng);
            s[i] = 1e4 * u(rng);
        }
        table(Isa::Scalar).effective_ratio(k.data(), r_on.data(), s.data(), ref.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(ref[i], (k[i] - 1.0) / (1.0 + s[i] / r_on[i]) + 1.0);
        for (Isa isa : simd_isas()) {
            table(isa).effective_ratio(k.data(), r_on.data(), s.data(), got.data(), n);
            EXPECT_TRUE(same_bits(ref, got)) << isa_name(isa) << " n=" << n;
        }
    }
}

TEST(Kernels, AccumulateRowsBitExact) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1e-4);
    for (std::size_t cols : {1u, 3u, 4u, 7u, 128u, 130u}) {
        const std::size_t n_rows = 40;
        std::vector<double> g(n_rows * cols);
        for (auto& x : g) x = u(rng);
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < n_rows; ++r)
            if (rng() % 2) rows.push_back(r);
        std::vector<double> ref(cols, 0.5), got(cols, 0.5);
        table(Isa::Scalar).accumulate_rows(g.data(), cols, rows.data(), rows.size(), ref.data());
        for (std::size_t c = 0; c < cols; ++c) {
            double acc = 0.5;
            for (auto r : rows) acc += g[r * cols + c];
            EXPECT_EQ(ref[c], acc);
        }
        for (Isa isa : simd_isas()) {
            std::fill(got.begin(), got.end(), 0.5);
            table(isa).accumulate_rows(g.data(), cols, rows.data(), rows.size(), got.data());
            EXPECT_TRUE(same_bits(ref, got)) << isa_name(isa) << " cols=" << cols;
        }
    }
}

TEST(Kernels, LadderBitExact) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t lanes : {1u, 2u, 4u, 5u, 8u, 11u}) {
        for (std::size_t n : {1u, 2u, 33u, 256u}) {
            std::vector<double> g(n * lanes), v(lanes), r(lanes);
            for (auto& x : g) x = rng() % 5 == 0 ? 0.0 : 1.0 / (1e3 + 1e6 * u(rng));
            for (auto& x : v) x = 0.1 + u(rng);
            for (auto& x : r) x = 0.01 + 10 * u(rng);
            auto run = [&](Isa isa) {
                std::vector<double> scratch(n * lanes), vn(n * lanes), ib(n * lanes), isl(lanes);
                table(isa).ladder_solve({n, lanes, g.data(), v.data(), r.data(), scratch.data(), vn.data(), ib.data(),
                                         isl.data()});
                vn.insert(vn.end(), ib.begin(), ib.end());
                vn.insert(vn.end(), isl.begin(), isl.end());
                return vn;
            };
            const auto ref = run(Isa::Scalar);
            for (Isa isa : simd_isas()) EXPECT_TRUE(same_bits(ref, run(isa))) << isa_name(isa) << " " << lanes << "x" << n;
        }
    }
}
