#pragma once

namespace lvsmile {

// Zero-rate, zero-dividend Black-Scholes call in log coordinates.
struct BsPoint {
    double sigma;  // volatility, > 0
    double t;      // maturity in years, > 0
    double y;      // log spot
    double k;      // log strike
};

double norm_cdf(double x);
double norm_pdf(double x);

// e^y N(d1) - e^k N(d2), d1 = (y - k + sigma^2 t / 2)/(sigma sqrt(t)),
// d2 = d1 - sigma sqrt(t).
double bs_price(const BsPoint& p);

// n-th derivative of bs_price with respect to sigma, 1 <= n <= 8, computed
// from the closed-form vega times a polynomial in (d1, d2, 1/sigma) built by
// symbolic differentiation of d1, d2.
double bs_sigma_derivative(const BsPoint& p, int order);

inline constexpr int kMaxSigmaDerivativeOrder = 8;

// Inverts bs_price in sigma by safeguarded Newton with bisection fallback on
// [1e-6, 5]. Requires price strictly inside ((e^y - e^k)^+, e^y); converges
// to |bs - price| <= 1e-12 e^y.
double implied_vol(double price, double t, double y, double k);

}  // namespace lvsmile
