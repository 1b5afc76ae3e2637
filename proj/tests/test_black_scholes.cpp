#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lvsmile/black_scholes.hpp"
#include "lvsmile/errors.hpp"
#include "lvsmile/quadrature.hpp"
#include "lvsmile/transforms.hpp"
#include "support/bs_fd_table.hpp"
#include "support/oracles.hpp"

using namespace lvsmile;
using cd = std::complex<double>;

TEST_CASE("at-the-money price equals 2 N(sigma sqrt(t)/2) - 1") {
    CHECK(bs_price({0.25, 1.0, 0.0, 0.0}) ==
          doctest::Approx(0.09947644966022579).epsilon(1e-14));
}

TEST_CASE("degenerate limits") {
    // sigma -> 0 with k < y: intrinsic value
    CHECK(bs_price({1e-8, 1.0, 0.0, -0.5}) ==
          doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-12));
    // far strike: worthless
    CHECK(bs_price({0.25, 1.0, 0.0, 40.0}) == doctest::Approx(0.0).epsilon(1e-300));
}

TEST_CASE("vega at the money") {
    CHECK(bs_sigma_derivative({0.25, 1.0, 0.0, 0.0}, 1) ==
          doctest::Approx(0.3958376869447495).epsilon(1e-13));
}

TEST_CASE("vega strictly positive wherever it is representable") {
    // the real-arithmetic statement is vega > 0 for every sigma > 0; in
    // doubles the gaussian factor underflows past |d1| ~ 38, so sample with
    // strikes a bounded number of standard deviations from the money
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> us(0.05, 1.0), ut(0.05, 5.0), uz(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const double s = us(gen), t = ut(gen);
        const double k = uz(gen) * s * std::sqrt(t);
        CHECK(bs_sigma_derivative({s, t, 0.0, k}, 1) > 0.0);
    }
}

TEST_CASE("price strictly increasing in sigma") {
    // sampled away from the deep wings, where in doubles the increment per
    // sigma step would drop below one ulp of the price
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> ut(0.5, 4.0), uk(-0.25, 0.25);
    for (int i = 0; i < 50; ++i) {
        const double t = ut(gen), k = uk(gen);
        double prev = bs_price({0.08, t, 0.0, k});
        for (double s = 0.12; s <= 1.0; s += 0.04) {
            const double cur = bs_price({s, t, 0.0, k});
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("sigma derivatives 1..4 match the finite-difference table") {
    for (const auto& row : oracles::kBsFdTable) {
        const BsPoint p{row.sigma, row.t, row.y, row.k};
        for (int n = 1; n <= 4; ++n) {
            const double fd = row.d[n - 1];
            const double cf = bs_sigma_derivative(p, n);
            // vega-scaled floor: volga and higher orders cross zero
            CHECK(std::abs(cf - fd) <= 1e-6 * std::max(std::abs(fd), row.d[0]));
        }
    }
}

TEST_CASE("low orders also match live long-double central differences") {
    // direct stencils are usable for n <= 2; higher orders are covered by the
    // precomputed table
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> us(0.15, 0.7), ut(0.3, 3.0), uy(-0.5, 0.5),
        uz(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double sigma = us(gen), t = ut(gen), y = uy(gen);
        const double k = y + uz(gen) * sigma * std::sqrt(t);
        std::function<oracles::ld(oracles::ld)> f = [&](oracles::ld s) {
            return oracles::bs_price_ld(s, t, y, k);
        };
        const double vega = bs_sigma_derivative({sigma, t, y, k}, 1);
        for (int n = 1; n <= 2; ++n) {
            const double fd = oracles::central_fd_richardson(f, sigma, n, 1.5e-3 * sigma);
            const double cf = bs_sigma_derivative({sigma, t, y, k}, n);
            CHECK(std::abs(cf - fd) <= 1e-6 * std::max(std::abs(fd), vega));
        }
    }
}

TEST_CASE("derivative order cap") {
    CHECK_THROWS_AS(bs_sigma_derivative({0.2, 1.0, 0.0, 0.0}, 9), std::invalid_argument);
    CHECK_THROWS_AS(bs_sigma_derivative({0.2, 1.0, 0.0, 0.0}, 0), std::invalid_argument);
    CHECK_NOTHROW(bs_sigma_derivative({0.2, 1.0, 0.0, 0.0}, 8));
}

TEST_CASE("implied vol round trip") {
    CHECK(implied_vol(bs_price({0.25, 1.0, 0.0, 0.0}), 1.0, 0.0, 0.0) ==
          doctest::Approx(0.25).epsilon(1e-10));
    // strikes within a few standard deviations: further out the map flattens
    // below the 1e-12 price tolerance and inversion is ill-posed by design
    std::mt19937 gen(29);
    std::uniform_real_distribution<double> us(0.08, 1.2), ut(0.1, 5.0), uy(-0.5, 0.5),
        uz(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double s = us(gen), t = ut(gen), y = uy(gen);
        const double k = y + uz(gen) * s * std::sqrt(t);
        const double price = bs_price({s, t, y, k});
        CHECK(implied_vol(price, t, y, k) == doctest::Approx(s).epsilon(1e-9));
    }
}

TEST_CASE("implied vol rejects prices outside the arbitrage interval") {
    CHECK_THROWS_AS(implied_vol(1.0 - std::exp(-0.2), 1.0, 0.0, -0.2), std::invalid_argument);
    CHECK_THROWS_AS(implied_vol(0.0, 1.0, 0.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(implied_vol(1.0, 1.0, 0.0, 0.0), std::invalid_argument);  // price = spot
}

TEST_CASE("Fourier representation reproduces the closed form and its low derivatives") {
    // u^BS(sigma) = int e^{t phi^BS_lambda(sigma)} (psi_lambda, h) psi_lambda(y) dxi
    // on Im(lambda) = -1.5; differentiating the exponent in sigma gives the
    // vega and volga integrands.
    const double sigma = 0.3, t = 1.5, y = 0.1, k = 0.25, c = -1.5;
    const PayoffSpec call = PayoffSpec::call_at(k);
    auto phi_bs = [&](cd lam) { return 0.5 * sigma * sigma * (-lam * lam - cd{0, 1} * lam); };
    ContourIntegrand f = [&](double xi, std::span<cd> out) {
        const cd lam{xi, c};
        const cd base = std::exp(t * phi_bs(lam)) * payoff_coefficient(call, lam) *
                        std::exp(cd{0, 1} * lam * y) / 2.5066282746310005;
        const cd dexp = 2.0 * t * phi_bs(lam) / sigma;  // d/dsigma of t phi^BS
        out[0] = base;
        out[1] = base * dexp;
        out[2] = base * (dexp * dexp + 2.0 * t * phi_bs(lam) / (sigma * sigma));
    };
    const auto got = integrate_contour(f, 3, 60.0, 1e-12, 400000);
    CHECK(got.components[0].real() ==
          doctest::Approx(bs_price({sigma, t, y, k})).epsilon(1e-10));
    CHECK(got.components[1].real() ==
          doctest::Approx(bs_sigma_derivative({sigma, t, y, k}, 1)).epsilon(1e-9));
    CHECK(got.components[2].real() ==
          doctest::Approx(bs_sigma_derivative({sigma, t, y, k}, 2)).epsilon(1e-8));
}
