#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lvsmile/black_scholes.hpp"
#include "lvsmile/mc.hpp"
#include "lvsmile/pricer.hpp"
#include "support/oracles.hpp"

using namespace lvsmile;

namespace {
const ModelParams kSkewSet(0.25, 0.15 * 0.15, -0.75, 0.0);
}

TEST_CASE("inverse normal cdf round-trips the cdf") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        CHECK(inverse_normal_cdf(oracles::norm_cdf(x)) == doctest::Approx(x).epsilon(2e-7));
    }
}

TEST_CASE("same seed gives bit-identical estimates, any thread count") {
    McConfig cfg;
    cfg.n_paths = 20000;
    cfg.dt = 0.05;
    cfg.seed = 77;
    const McEstimate a = simulate_call(kSkewSet, 1.0, 0.1, cfg);
    const McEstimate b = simulate_call(kSkewSet, 1.0, 0.1, cfg);
    CHECK(a.price == b.price);
    CHECK(a.std_error == b.std_error);

    McConfig one = cfg, four = cfg;
    one.threads = 1;
    four.threads = 4;
    const McEstimate c = simulate_call(kSkewSet, 1.0, 0.1, one);
    const McEstimate d = simulate_call(kSkewSet, 1.0, 0.1, four);
    CHECK(c.price == a.price);
    CHECK(d.price == a.price);
    CHECK(d.std_error == a.std_error);
}

TEST_CASE("eps = 0: the log-Euler scheme is exact in law, estimate within 3 SE") {
    // constant coefficients make each Euler step the exact transition, so the
    // only error is statistical, at any step size
    const ModelParams gbm(0.25, 0.0, -0.75, 0.0);
    const double bs = bs_price({0.25, 1.0, 0.0, 0.0});
    for (double dt : {0.5, 0.25}) {
        McConfig cfg;
        cfg.n_paths = 1000000;
        cfg.dt = dt;
        cfg.seed = 31 + static_cast<int>(1.0 / dt);
        const McEstimate e = simulate_call(gbm, 1.0, 0.0, cfg);
        CHECK(std::abs(e.price - bs) <= 3.0 * e.std_error);
    }
}

TEST_CASE("martingale property: mean of e^{Y_t} is e^y within 4 SE") {
    // a deep strike turns the call payoff into e^Y minus a known constant
    McConfig cfg;
    cfg.n_paths = 200000;
    cfg.dt = 0.01;
    cfg.seed = 5;
    const double k = -30.0;
    const ModelParams p(0.25, 0.0225, -0.75, 0.2);
    const McEstimate e = simulate_call(p, 1.0, k, cfg);
    const double mean_exp_y = e.price + std::exp(k);
    CHECK(std::abs(mean_exp_y - std::exp(0.2)) <= 4.0 * e.std_error);
}

TEST_CASE("standard error scales like 1/sqrt(n)") {
    McConfig small, big;
    small.n_paths = 50000;
    big.n_paths = 200000;
    small.dt = big.dt = 0.05;
    small.seed = big.seed = 11;
    const double se1 = simulate_call(kSkewSet, 1.0, 0.0, small).std_error;
    const double se2 = simulate_call(kSkewSet, 1.0, 0.0, big).std_error;
    CHECK(se1 / se2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("antithetic halves the observation count and keeps the mean sane") {
    McConfig cfg;
    cfg.n_paths = 200000;
    cfg.dt = 0.05;
    cfg.seed = 13;
    cfg.antithetic = true;
    const ModelParams gbm(0.25, 0.0, -0.75, 0.0);
    const McEstimate e = simulate_call(gbm, 1.0, 0.0, cfg);
    CHECK(std::abs(e.price - bs_price({0.25, 1.0, 0.0, 0.0})) <= 4.0 * e.std_error);
    CHECK(e.std_error > 0.0);
}

TEST_CASE("batched strikes equal individual runs with the same seed") {
    McConfig cfg;
    cfg.n_paths = 30000;
    cfg.dt = 0.1;
    cfg.seed = 17;
    const std::vector<double> ks{-0.3, 0.0, 0.3};
    const auto batch = simulate_calls(kSkewSet, 1.0, ks, cfg);
    for (size_t i = 0; i < ks.size(); ++i) {
        const McEstimate solo = simulate_call(kSkewSet, 1.0, ks[i], cfg);
        CHECK(batch[i].price == solo.price);
        CHECK(batch[i].std_error == solo.std_error);
    }
}

TEST_CASE("eps sensitivity approximates the first series coefficient") {
    // forward difference from eps = 0 with common random numbers against the
    // eps-free u_1 from the collapsed series
    const PriceSeries series =
        price(kSkewSet, PayoffSpec::call_at(0.0), 1.0, 3, ContourSpec::for_payoff(PayoffSpec::call_at(0.0)));
    const double u1 = series.terms[1] / kSkewSet.eps;
    const double u2 = series.terms[2] / (kSkewSet.eps * kSkewSet.eps);

    const ModelParams base(kSkewSet.a, 0.0, kSkewSet.beta, kSkewSet.y);
    McConfig cfg;
    cfg.n_paths = 100000;
    cfg.dt = 5e-3;
    cfg.seed = 23;
    const double d_eps = 1e-3;
    const SensitivityEstimate fd = eps_sensitivity(base, 1.0, 0.0, cfg, d_eps);
    // 3 SE plus the first-order finite-difference bias d_eps |u_2|
    CHECK(std::abs(fd.value - u1) <= 3.0 * fd.std_error + 1.5 * d_eps * std::abs(u2));
}

TEST_CASE("halving d_eps moves the estimate less than the confidence width") {
    const ModelParams base(kSkewSet.a, 0.0, kSkewSet.beta, kSkewSet.y);
    McConfig cfg;
    cfg.n_paths = 50000;
    cfg.dt = 0.01;
    cfg.seed = 29;
    const SensitivityEstimate s1 = eps_sensitivity(base, 1.0, 0.0, cfg, 2e-3);
    const SensitivityEstimate s2 = eps_sensitivity(base, 1.0, 0.0, cfg, 1e-3);
    CHECK(std::abs(s1.value - s2.value) <= 3.0 * (s1.std_error + s2.std_error));
}

TEST_CASE("bumping a instead recovers the closed-form vega") {
    // control experiment: at eps = 0 the price is Black-Scholes in a, so a
    // common-random-numbers bump in a must reproduce dBS/da
    McConfig cfg;
    cfg.n_paths = 200000;
    cfg.dt = 0.25;
    cfg.seed = 37;
    const double da = 1e-3;
    const ModelParams lo(0.25, 0.0, -0.75, 0.0), hi(0.25 + da, 0.0, -0.75, 0.0);
    const double p_lo = simulate_call(lo, 1.0, 0.0, cfg).price;
    const double p_hi = simulate_call(hi, 1.0, 0.0, cfg).price;
    const double vega = bs_sigma_derivative({0.25, 1.0, 0.0, 0.0}, 1);
    CHECK((p_hi - p_lo) / da == doctest::Approx(vega).epsilon(0.05));
}

TEST_CASE("config validation") {
    McConfig cfg;
    cfg.n_paths = 50;
    CHECK_THROWS_AS(simulate_call(kSkewSet, 1.0, 0.0, cfg), std::invalid_argument);
    cfg.n_paths = 1000;
    cfg.dt = 2.0;
    CHECK_THROWS_AS(simulate_call(kSkewSet, 1.0, 0.0, cfg), std::invalid_argument);
    cfg.dt = 0.1;
    cfg.antithetic = true;
    cfg.n_paths = 1001;
    CHECK_THROWS_AS(simulate_call(kSkewSet, 1.0, 0.0, cfg), std::invalid_argument);
    cfg.n_paths = 1000;
    CHECK_NOTHROW(simulate_call(kSkewSet, 1.0, 0.0, cfg));
    McConfig ok;
    CHECK_THROWS_AS(eps_sensitivity(kSkewSet, 1.0, 0.0, ok, 0.5), std::invalid_argument);
}

TEST_CASE("general-eta simulator matches the e^{beta y} specialization") {
    McConfig cfg;
    cfg.n_paths = 20000;
    cfg.dt = 0.1;
    cfg.seed = 41;
    const std::vector<double> ks{0.0};
    const auto spec = simulate_calls(kSkewSet, 1.0, ks, cfg);
    const double beta = kSkewSet.beta;
    const auto gen = simulate_calls_eta(kSkewSet.a, kSkewSet.eps,
                                        [beta](double y) { return std::exp(beta * y); },
                                        kSkewSet.y, 1.0, ks, cfg);
    CHECK(spec[0].price == gen[0].price);
    CHECK(spec[0].std_error == gen[0].std_error);
}
