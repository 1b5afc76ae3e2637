#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lvsmile/model.hpp"
#include "lvsmile/transforms.hpp"

namespace lvsmile {

// Truncated series price u^(N) at one (t, payoff) point. terms[n] carries
// eps^n u_n, so total is the plain ordered sum of terms (accumulated in
// ascending order, exactly).
struct PriceSeries {
    double t = 0.0;
    PayoffSpec payoff{PayoffKind::call, 0.0};
    int order = 0;
    std::vector<double> terms;
    double total = 0.0;
    double tail_proxy = 0.0;     // |terms[order]| / |total|
    long quad_nodes = 0;
    double imag_residual = 0.0;  // discarded imaginary part of the integral
};

// Transition-density approximations on a y grid: p_orders[m][j] is the
// cumulative sum p^(m)(t, y_j; y0) = sum_{k<=m} eps^k p_k.
struct DensityGrid {
    double t = 0.0;
    double y0 = 0.0;
    std::vector<double> y_values;
    std::vector<std::vector<double>> p_orders;
};

// Summed integrand of the collapsed single-contour formula at one lambda:
//   (psi_lambda, h) psi_lambda(y) sum_{n=0}^{N} eps^n e^{n beta y}
//     dd(t; phi_{lambda - i k beta}, k=0..n) prod_{k<n} chi_{lambda - i k beta}
// where dd is the divided difference of e^{t.} over the shifted eigenvalues
// (equivalently, the partial-fraction pole sum of the iterated time integrals).
std::complex<double> series_integrand(const ModelParams& params, const PayoffSpec& payoff,
                                      double t, int order, std::complex<double> lambda);

// Integrates the series over the contour Im(lambda) = offset, recording each
// order separately on shared quadrature nodes. The imaginary part of the sum
// must be negligible (conjugate symmetry of the contour); a residual above
// 1e-8 of the real part signals a contour or truncation bug and throws
// ImaginaryResidualError.
PriceSeries price(const ModelParams& params, const PayoffSpec& payoff, double t, int order,
                  const ContourSpec& contour);

// Prices the Dirac payoff at each grid point from y0 on the real contour,
// accumulating cumulative orders 0..order. The grid must be ascending.
DensityGrid density(const ModelParams& params, double t, double y0, int order,
                    std::span<const double> y_grid, const ContourSpec& contour);

// Perturbation sampled on a uniform grid; values are assumed to have decayed
// to ~0 at both ends (Schwartz-like). Used only by the general-eta n = 1
// cross-check.
struct SampledEta {
    double y_lo = 0.0;
    double dy = 0.0;
    std::vector<double> values;

    double y_hi() const { return y_lo + dy * (values.empty() ? 0 : values.size() - 1); }
    // Fourier transform (1/sqrt(2pi)) int eta(y) e^{i mu y} dy by Simpson.
    std::complex<double> transform(std::complex<double> mu) const;
};

// First-order series coefficient u_1 for a general sampled perturbation,
// evaluated as the double integral over (lambda_0, lambda_1) with kernel
// chi_{lambda_0} etahat(lambda_0 - lambda_1)/sqrt(2pi). Cross-check oracle
// for the collapsed formula and the Monte Carlo sensitivity; not a
// production path. Only params.a and params.y enter (eta replaces e_beta,
// and the result is the eps-free coefficient).
double u1_general_eta(const ModelParams& params, const SampledEta& eta, double t,
                      const PayoffSpec& payoff, const ContourSpec& contour);

// Default truncation half-width of the contour integral: the Gaussian factor
// |e^{t phi}| = e^{-t a^2 xi^2 / 2} reaches rel_tol at the returned width,
// padded for the shifted nodes.
double auto_half_width(double t, double a, int order, double beta, double rel_tol);

}  // namespace lvsmile
