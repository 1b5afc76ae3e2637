#include "lvsmile/smile.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lvsmile/black_scholes.hpp"
#include "lvsmile/errors.hpp"

namespace lvsmile {

namespace {

constexpr double kVegaFloor = 1e-14;

void enumerate(int remaining, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (int first = 1; first <= remaining; ++first) {
        prefix.push_back(first);
        enumerate(remaining - first, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<const std::vector<int>*> CompositionTable::with_length(int n) const {
    std::vector<const std::vector<int>*> out;
    for (const auto& c : parts)
        if (static_cast<int>(c.size()) == n) out.push_back(&c);
    return out;
}

const CompositionTable& compositions(int k) {
    if (k < 1 || k > kMaxSmileOrder)
        throw std::invalid_argument("compositions: k must be in [1, 8]");
    static const std::array<CompositionTable, kMaxSmileOrder> tables = [] {
        std::array<CompositionTable, kMaxSmileOrder> out;
        for (int kk = 1; kk <= kMaxSmileOrder; ++kk) {
            CompositionTable t;
            t.k = kk;
            std::vector<int> prefix;
            enumerate(kk, prefix, t.parts);
            std::sort(t.parts.begin(), t.parts.end(),
                      [](const std::vector<int>& a, const std::vector<int>& b) {
                          if (a.size() != b.size()) return a.size() < b.size();
                          return a < b;
                      });
            out[kk - 1] = std::move(t);
        }
        return out;
    }();
    return tables[k - 1];
}

std::vector<double> sigma_coefficients(const ModelParams& params, double t, double k_logstrike,
                                       int order, const PriceSeries& price_terms) {
    if (order < 0 || order > kMaxSmileOrder)
        throw std::invalid_argument("sigma_coefficients: order must be in [0, 8]");
    if (price_terms.order < order)
        throw std::invalid_argument("sigma_coefficients: price series order too low");

    std::vector<double> sig(order + 1, 0.0);
    sig[0] = params.a;
    if (order == 0) return sig;
    if (params.eps == 0.0) return sig;  // all corrections vanish identically

    const BsPoint at_base{params.a, t, params.y, k_logstrike};
    std::vector<double> deriv(order + 1, 0.0);
    for (int m = 1; m <= order; ++m) deriv[m] = bs_sigma_derivative(at_base, m);
    if (std::abs(deriv[1]) < kVegaFloor)
        throw VegaUnderflowError("sigma_coefficients: vega below floor at this strike");

    // eps-free price coefficients u_k = terms[k] / eps^k
    std::vector<double> u(order + 1, 0.0);
    double eps_pow = 1.0;
    for (int k = 0; k <= order; ++k) {
        u[k] = price_terms.terms[k] / eps_pow;
        eps_pow *= params.eps;
    }

    for (int k = 1; k <= order; ++k) {
        double correction = 0.0;
        double m_fact = 1.0;
        for (int m = 2; m <= k; ++m) {
            m_fact *= m;
            double comp_sum = 0.0;
            for (const std::vector<int>* comp : compositions(k).with_length(m)) {
                double prod = 1.0;
                for (int j : *comp) prod *= sig[j];
                comp_sum += prod;
            }
            correction += comp_sum * deriv[m] / m_fact;
        }
        sig[k] = (u[k] - correction) / deriv[1];
    }
    return sig;
}

SmileCurve smile_curve(const ModelParams& params, double t, std::span<const double> k_grid,
                       int order, const ContourSpec& contour, bool with_reference) {
    if (order < 0 || order > kMaxSmileOrder)
        throw std::invalid_argument("smile_curve: order must be in [0, 8]");
    SmileCurve curve;
    curve.t = t;
    curve.y = params.y;
    curve.points.reserve(k_grid.size());

    contour.validate(PayoffSpec::call_at(params.y));  // config errors fail the whole curve

    const int price_order = std::max(order, 10);
    for (double k : k_grid) {
        SmilePoint pt;
        pt.k = k;
        pt.lmmr = (k - params.y) / t;
        try {
            const PriceSeries series =
                price(params, PayoffSpec::call_at(k), t, price_order, contour);
            const std::vector<double> sig = sigma_coefficients(params, t, k, order, series);
            pt.sigmas.resize(order + 1);
            double acc = 0.0;
            double eps_pow = 1.0;
            for (int m = 0; m <= order; ++m) {
                acc += eps_pow * sig[m];
                pt.sigmas[m] = acc;
                eps_pow *= params.eps;
            }
            if (with_reference) pt.reference = implied_vol(series.total, t, params.y, k);
        } catch (const NumericalError& e) {
            pt.error = e.what();
        } catch (const std::invalid_argument& e) {
            pt.error = e.what();  // e.g. inversion outside the arbitrage interval
        }
        curve.points.push_back(std::move(pt));
    }
    return curve;
}

}  // namespace lvsmile
