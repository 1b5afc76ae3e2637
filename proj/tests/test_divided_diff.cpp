#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lvsmile/divided_diff.hpp"
#include "lvsmile/model.hpp"
#include "support/oracles.hpp"

using namespace lvsmile;
using cd = std::complex<double>;

TEST_CASE("single node is e^{tz}") {
    const cd z{-0.3, 0.8};
    const cd nodes[1] = {z};
    CHECK(std::abs(divided_diff_exp(2.0, nodes) - std::exp(2.0 * z)) < 1e-15);
}

TEST_CASE("confluent pair is t e^{tz}") {
    const cd z{-0.4, 1.1};
    const cd nodes[2] = {z, z};
    const double t = 1.7;
    CHECK(std::abs(divided_diff_exp(t, nodes) - t * std::exp(t * z)) <=
          1e-10 * std::abs(t * std::exp(t * z)));
}

TEST_CASE("confluent triple is t^2 e^{tz} / 2") {
    const cd z{-1.0, 0.5};
    const cd nodes[3] = {z, z, z};
    const double t = 0.9;
    const cd expect = 0.5 * t * t * std::exp(t * z);
    CHECK(std::abs(divided_diff_exp(t, nodes) - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("random distinct nodes match the direct pole sum") {
    std::mt19937 gen(19);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);  // 2..6 nodes
        const auto nodes = oracles::random_nodes(gen, n, 0.1);
        const cd lib = divided_diff_exp(1.0, nodes);
        const cd ref = oracles::pole_sum_dd(1.0, nodes);
        CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1e-30, std::abs(ref)));
    }
}

TEST_CASE("t = 0 zero sum for distinct nodes") {
    std::mt19937 gen(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 5);
        const auto nodes = oracles::random_nodes(gen, n, 0.05);
        CHECK(std::abs(divided_diff_exp(0.0, nodes)) <= 1e-12);
    }
}

TEST_CASE("prefix variant agrees with the one-shot value on each prefix") {
    std::mt19937 gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto nodes = oracles::random_nodes(gen, 6, 0.05);
        const auto pre = divided_diff_exp_prefixes(1.3, nodes);
        for (size_t m = 0; m < nodes.size(); ++m) {
            const cd one = divided_diff_exp(
                1.3, std::span<const cd>(nodes.data(), m + 1));
            CHECK(std::abs(pre[m] - one) <= 1e-10 * std::max(1e-30, std::abs(one)));
        }
    }
}

TEST_CASE("shifted eigenvalue family: both regimes match the pole sum") {
    // nodes phi_{lambda - i k beta}: clustered near xi = 0, separated far out
    const double a = 0.25, beta = -0.75, t = 1.0;
    for (double xi : {25.0, 60.0, 120.0}) {  // separated: recurrence regime
        std::vector<cd> nodes;
        for (int k = 0; k <= 10; ++k)
            nodes.push_back(phi0(cd{xi, -1.5} - cd{0.0, 1.0} * (k * beta), a));
        const auto pre = divided_diff_exp_prefixes(t, nodes);
        const cd ref = oracles::pole_sum_dd(t, nodes);
        CHECK(std::abs(pre[10] - ref) <= 1e-9 * std::abs(ref));
    }
    // clustered regime: compare low orders against the 2- and 3-node pole sums
    for (double xi : {0.0, 1.0, 3.0}) {
        std::vector<cd> nodes;
        for (int k = 0; k <= 3; ++k)
            nodes.push_back(phi0(cd{xi, -1.5} - cd{0.0, 1.0} * (k * beta), a));
        const auto pre = divided_diff_exp_prefixes(t, nodes);
        const cd ref2 = oracles::pole_sum_dd(t, std::span<const cd>(nodes.data(), 2));
        CHECK(std::abs(pre[1] - ref2) <= 1e-9 * std::abs(ref2));
    }
}

TEST_CASE("beta = 0 family is fully confluent: t^n e^{t phi} / n!") {
    const double a = 0.3, t = 2.0;
    const cd lam{4.0, -1.5};
    std::vector<cd> nodes(8, phi0(lam, a));
    const auto pre = divided_diff_exp_prefixes(t, nodes);
    double fact = 1.0;
    for (int n = 0; n < 8; ++n) {
        if (n > 0) fact *= n;
        const cd expect = std::pow(t, n) * std::exp(t * phi0(lam, a)) / fact;
        CHECK(std::abs(pre[n] - expect) <= 1e-12 * std::abs(expect));
    }
}

TEST_CASE("prefix variant survives an exact duplicate in a separated set") {
    const cd z{-2.0, 3.0};
    const std::vector<cd> nodes{z, cd{-14.0, -5.0}, z};
    const auto pre = divided_diff_exp_prefixes(1.0, nodes);
    std::vector<cd> nearby{z, cd{-14.0, -5.0}, z + cd{1e-6, 0.0}};
    const cd ref = oracles::pole_sum_dd(1.0, nearby);
    CHECK(std::abs(pre[2] - ref) <= 1e-5 * std::abs(ref));
}

TEST_CASE("separated set containing an exact duplicate pair") {
    // diameter forces the recurrence path; the duplicate must take the
    // confluent closed form, not divide by zero
    const cd z{-2.0, 3.0};
    const std::vector<cd> nodes{z, cd{-14.0, -5.0}, z, cd{5.0, 4.0}};
    const cd v = divided_diff_exp(1.0, nodes);
    CHECK(std::isfinite(v.real()));
    CHECK(std::isfinite(v.imag()));
    // against a tiny perturbation of the pair, which is pole-sum computable
    std::vector<cd> nearby{z, cd{-14.0, -5.0}, z + cd{1e-6, 0.0}, cd{5.0, 4.0}};
    const cd ref = oracles::pole_sum_dd(1.0, nearby);
    CHECK(std::abs(v - ref) <= 1e-5 * std::abs(ref));
}
