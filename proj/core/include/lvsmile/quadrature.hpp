#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace lvsmile {

// Vector-valued integrand along a horizontal contour: writes one value per
// component at real abscissa xi (the caller bakes the imaginary offset in).
using ContourIntegrand = std::function<void(double xi, std::span<std::complex<double>> out)>;

struct QuadratureOutcome {
    std::vector<std::complex<double>> components;
    long nodes_used = 0;
    double abs_tol = 0.0;       // absolute tolerance the final pass ran at
    double err_estimate = 0.0;  // accumulated panel error of the final pass
};

// Adaptive bisection with a nested Clenshaw-Curtis 17/9 panel rule over
// [-half_width, half_width]. Components share panels, so their integrals are
// consistent node-for-node; the error control runs on the component sum.
// Deterministic: fixed initial panels, depth-first left-to-right refinement,
// accumulation in traversal order. Throws QuadratureError when the node
// budget is exhausted before the tolerance is met.
QuadratureOutcome integrate_contour(const ContourIntegrand& f, int n_components,
                                    double half_width, double rel_tol, long max_nodes);

}  // namespace lvsmile
