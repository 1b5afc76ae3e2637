#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lvsmile/model.hpp"
#include "lvsmile/pricer.hpp"
#include "lvsmile/transforms.hpp"

namespace lvsmile {

// Ordered compositions of k (tuples of positive integers summing to k),
// sorted by length; there are exactly 2^{k-1} of them.
struct CompositionTable {
    int k = 0;
    std::vector<std::vector<int>> parts;

    // compositions of k into exactly n parts
    std::vector<const std::vector<int>*> with_length(int n) const;
};

inline constexpr int kMaxSmileOrder = 8;

// k in [1, 8]; tables are built once and shared.
const CompositionTable& compositions(int k);

// Implied-volatility expansion coefficients [sigma_0 .. sigma_n] at one
// strike, from the price series computed at the same (t, k). sigma_0 = a and
//   sigma_k = (u_k - sum_{m=2}^{k} (1/m!) (sum over compositions of k into m
//             parts of prod sigma_{j_i}) d^m/dsigma^m u^BS(a)) / vega(a)
// with u_k the eps-free coefficient price_terms.terms[k] / eps^k.
// Throws VegaUnderflowError when vega < 1e-14.
std::vector<double> sigma_coefficients(const ModelParams& params, double t, double k_logstrike,
                                       int order, const PriceSeries& price_terms);

struct SmilePoint {
    double k = 0.0;
    double lmmr = 0.0;                  // (k - y) / t
    std::vector<double> sigmas;         // sigma^(0) .. sigma^(n), cumulative
    std::optional<double> reference;    // sigma^eps from direct inversion
    std::string error;                  // nonempty when this point failed
};

struct SmileCurve {
    double t = 0.0;
    double y = 0.0;
    std::vector<SmilePoint> points;
};

// Truncated smiles sigma^(m) = sum_{j<=m} eps^j sigma_j on a log-strike grid.
// Prices at N = max(order, 10); with_reference also inverts that price
// numerically (the two-step reference procedure). Failures are point-level:
// a bad strike is recorded in SmilePoint::error and the rest of the curve is
// still produced.
SmileCurve smile_curve(const ModelParams& params, double t, std::span<const double> k_grid,
                       int order, const ContourSpec& contour, bool with_reference);

}  // namespace lvsmile
