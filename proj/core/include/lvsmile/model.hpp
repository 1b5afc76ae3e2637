#pragma once

#include <complex>

namespace lvsmile {

// Local volatility model dX = (a^2 + eps * x^beta)^{1/2} X dW in log
// coordinates Y = log X. The local variance a^2 + eps * e^{beta y} blows up
// as y -> -inf (beta < 0) and flattens to a^2 as y -> +inf.
struct ModelParams {
    double a;     // base volatility, per sqrt-year
    double eps;   // perturbation size
    double beta;  // elasticity exponent; beta = 0 is the flat-vol limit
    double y;     // log of the initial spot

    ModelParams(double a_, double eps_, double beta_, double y_);

    // Local variance a^2 + eps * e^{beta y} at a log-price level.
    double local_variance(double log_level) const;
};

// Eigenvalue of A_0 = a^2/2 (d^2 - d) on psi_lambda = e^{i lambda y}/sqrt(2pi):
// phi_lambda = a^2/2 (-lambda^2 - i lambda). Vanishes at lambda = 0 and -i.
std::complex<double> phi0(std::complex<double> lambda, double a);

// Eigenvalue of A_1 = 1/2 (d^2 - d): chi_lambda = 1/2 (-lambda^2 - i lambda),
// so phi0(lambda, a) == a^2 * chi(lambda) identically.
std::complex<double> chi(std::complex<double> lambda);

// L2 norm of e^{beta y} on (y0, inf): e^{beta y0} / sqrt(-2 beta).
// Requires beta < 0.
double eta_norm(double beta, double y0);

// Lower edge y* of the region where the series is guaranteed to converge:
// y* = (1/beta) log(a^2 sqrt(-2 beta) / eps). Requires eps > 0 and beta < 0
// (for eps = 0 the threshold is -inf; callers report that case themselves,
// it is not encoded as a sentinel value).
double validity_threshold(const ModelParams& params);

// True iff eps <= a^2 / eta_norm(beta, y0), the series-convergence bound.
// Trivially true for eps = 0; false for beta = 0 (the norm is infinite).
bool check_series_bound(const ModelParams& params, double y0);

// Default truncation point for the norm in the bound checks: the pricing
// point minus this offset. Advisory only; exposed as a config knob upstream.
inline constexpr double kDefaultNormOffset = 5.0;

}  // namespace lvsmile
