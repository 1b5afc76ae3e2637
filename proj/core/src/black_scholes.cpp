#include "lvsmile/black_scholes.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lvsmile/errors.hpp"

namespace lvsmile {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void validate(const BsPoint& p) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("BsPoint: sigma must be positive");
    if (!(p.t > 0.0)) throw std::invalid_argument("BsPoint: t must be positive");
}

struct D12 {
    double d1, d2;
};

D12 d12(const BsPoint& p) {
    const double srt = p.sigma * std::sqrt(p.t);
    const double d1 = (p.y - p.k) / srt + 0.5 * srt;
    return {d1, d1 - srt};
}

// Polynomial in d1, d2 and 1/sigma: term key (i, j, l) -> coefficient of
// d1^i d2^j sigma^{-l}. The n-th sigma-derivative of the price is
// vega * P_n(d1, d2, 1/sigma) with P_1 = 1 and
//   P_{n+1} = (d1 d2 / sigma) P_n + D P_n,
//   D(d1^i d2^j s^-l) = (-i d1^{i-1} d2^{j+1} - j d1^{i+1} d2^{j-1}
//                        - l d1^i d2^j) s^{-l-1},
// which follows from d(d1)/ds = -d2/s, d(d2)/ds = -d1/s and d(vega)/ds =
// vega d1 d2 / s.
using Poly = std::map<std::array<int, 3>, double>;

void add_term(Poly& p, int i, int j, int l, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = p.try_emplace({i, j, l}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) p.erase(it);
    }
}

const std::vector<Poly>& derivative_polys() {
    static const std::vector<Poly> polys = [] {
        std::vector<Poly> out(kMaxSigmaDerivativeOrder + 1);
        add_term(out[1], 0, 0, 0, 1.0);
        for (int n = 1; n < kMaxSigmaDerivativeOrder; ++n) {
            Poly next;
            for (const auto& [key, c] : out[n]) {
                const auto [i, j, l] = key;
                add_term(next, i + 1, j + 1, l + 1, c);             // vega factor
                add_term(next, i - 1, j + 1, l + 1, -c * i);        // d d1^i
                add_term(next, i + 1, j - 1, l + 1, -c * j);        // d d2^j
                add_term(next, i, j, l + 1, -c * l);                // d s^-l
            }
            out[n + 1] = std::move(next);
        }
        return out;
    }();
    return polys;
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double bs_price(const BsPoint& p) {
    validate(p);
    const auto [d1, d2] = d12(p);
    return std::exp(p.y) * norm_cdf(d1) - std::exp(p.k) * norm_cdf(d2);
}

double bs_sigma_derivative(const BsPoint& p, int order) {
    validate(p);
    if (order < 1 || order > kMaxSigmaDerivativeOrder)
        throw std::invalid_argument("bs_sigma_derivative: order must be in [1, 8]");
    const auto [d1, d2] = d12(p);
    const double vega = std::exp(p.y) * norm_pdf(d1) * std::sqrt(p.t);
    double val = 0.0;
    for (const auto& [key, c] : derivative_polys()[order]) {
        const auto [i, j, l] = key;
        val += c * std::pow(d1, i) * std::pow(d2, j) * std::pow(p.sigma, -l);
    }
    return vega * val;
}

double implied_vol(double price, double t, double y, double k) {
    if (!(t > 0.0)) throw std::invalid_argument("implied_vol: t must be positive");
    const double spot = std::exp(y);
    const double intrinsic = std::max(spot - std::exp(k), 0.0);
    if (!(price > intrinsic) || !(price < spot))
        throw std::invalid_argument("implied_vol: price outside the no-arbitrage interval");

    double lo = 1e-6, hi = 5.0;
    const double tol = 1e-12 * spot;
    auto f = [&](double sig) { return bs_price({sig, t, y, k}) - price; };
    if (f(lo) > 0.0) return lo;  // price indistinguishable from intrinsic at floor vol
    if (f(hi) < 0.0)
        throw std::invalid_argument("implied_vol: price above the sigma = 5 range");

    double sig = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double diff = f(sig);
        if (std::abs(diff) <= tol) return sig;
        if (diff > 0.0) hi = sig; else lo = sig;
        const double vega = bs_sigma_derivative({sig, t, y, k}, 1);
        double next = (vega > 1e-14) ? sig - diff / vega : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sig = next;
    }
    throw NumericalError("implied_vol: no convergence in 200 iterations");
}

}  // namespace lvsmile
