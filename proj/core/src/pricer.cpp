#include "lvsmile/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "lvsmile/divided_diff.hpp"
#include "lvsmile/errors.hpp"
#include "lvsmile/quadrature.hpp"

namespace lvsmile {

namespace {

using cd = std::complex<double>;

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kImagResidualRel = 1e-8;

// Per-order factors of the collapsed integrand at one lambda:
//   out[n] = coef(lambda) psi_lambda(y) eps^n e^{n beta y} dd_n prod_{k<n} chi_k
void integrand_orders(const ModelParams& p, const PayoffSpec& payoff, double t, int order,
                      cd lambda, std::vector<cd>& nodes, std::vector<cd>& dds,
                      std::span<cd> out) {
    const int np = order + 1;
    nodes.resize(np);
    for (int k = 0; k < np; ++k) nodes[k] = phi0(lambda - kI * (k * p.beta), p.a);
    dds.resize(np);
    divided_diff_exp_prefixes(t, nodes, dds);

    const cd pref = payoff_coefficient(payoff, lambda) * std::exp(kI * lambda * p.y) / kSqrt2Pi;
    const double eps_fac = p.eps * std::exp(p.beta * p.y);
    cd chi_prod{1.0, 0.0};
    double scale = 1.0;
    for (int n = 0; n < np; ++n) {
        out[n] = pref * scale * dds[n] * chi_prod;
        chi_prod *= chi(lambda - kI * (n * p.beta));
        scale *= eps_fac;
    }
}

struct ResolvedContour {
    double offset;
    double half_width;
    double rel_tol;
    long max_nodes;
};

ResolvedContour resolve(const ModelParams& p, const PayoffSpec& payoff, double t, int order,
                        const ContourSpec& contour) {
    contour.validate(payoff);
    if (!(t > 0.0)) throw std::invalid_argument("price: t must be positive");
    if (order < 0) throw std::invalid_argument("price: order must be non-negative");
    ResolvedContour r;
    r.offset = resolve_offset(contour.offset, order, p.beta, payoff.kind);
    r.half_width = contour.half_width
                       ? *contour.half_width
                       : auto_half_width(t, p.a, order, p.beta, contour.rel_tol);
    r.rel_tol = contour.rel_tol;
    r.max_nodes = contour.max_nodes;
    return r;
}

PriceSeries assemble(const PayoffSpec& payoff, double t, int order, int eff_order,
                     const QuadratureOutcome& q) {
    PriceSeries out;
    out.t = t;
    out.payoff = payoff;
    out.order = order;
    out.terms.assign(order + 1, 0.0);
    cd sum{0.0, 0.0};
    for (int n = 0; n <= eff_order; ++n) {
        out.terms[n] = q.components[n].real();
        sum += q.components[n];
    }
    for (int n = 0; n <= order; ++n) out.total += out.terms[n];
    out.quad_nodes = q.nodes_used;
    out.imag_residual = std::abs(sum.imag());
    if (out.imag_residual > kImagResidualRel * std::abs(sum.real()) &&
        out.imag_residual > 10.0 * q.abs_tol) {
        throw ImaginaryResidualError("price: imaginary residual " +
                                     std::to_string(out.imag_residual) + " vs real part " +
                                     std::to_string(sum.real()));
    }
    if (out.total != 0.0) out.tail_proxy = std::abs(out.terms[order]) / std::abs(out.total);
    return out;
}

}  // namespace

double auto_half_width(double t, double a, int order, double beta, double rel_tol) {
    const double gauss = std::sqrt(2.0 * std::log(1.0 / rel_tol) / (t * a * a));
    return std::max(40.0, gauss + std::abs(order * beta) + 10.0);
}

std::complex<double> series_integrand(const ModelParams& params, const PayoffSpec& payoff,
                                      double t, int order, std::complex<double> lambda) {
    if (!(t > 0.0)) throw std::invalid_argument("series_integrand: t must be positive");
    if (order < 0) throw std::invalid_argument("series_integrand: order must be non-negative");
    std::vector<cd> nodes, dds, vals(order + 1);
    integrand_orders(params, payoff, t, order, lambda, nodes, dds, vals);
    cd sum{0.0, 0.0};
    for (const cd& v : vals) sum += v;
    return sum;
}

PriceSeries price(const ModelParams& params, const PayoffSpec& payoff, double t, int order,
                  const ContourSpec& contour) {
    const ResolvedContour rc = resolve(params, payoff, t, order, contour);
    const int eff_order = (params.eps == 0.0) ? 0 : order;

    std::vector<cd> nodes, dds;
    ContourIntegrand f = [&](double xi, std::span<cd> out) {
        integrand_orders(params, payoff, t, eff_order, cd{xi, rc.offset}, nodes, dds, out);
    };
    const QuadratureOutcome q =
        integrate_contour(f, eff_order + 1, rc.half_width, rc.rel_tol, rc.max_nodes);
    return assemble(payoff, t, order, eff_order, q);
}

DensityGrid density(const ModelParams& params, double t, double y0, int order,
                    std::span<const double> y_grid, const ContourSpec& contour) {
    if (!std::is_sorted(y_grid.begin(), y_grid.end()))
        throw std::invalid_argument("density: y_grid must be ascending");
    const PayoffSpec probe = PayoffSpec::dirac_at(0.0);
    const ResolvedContour rc = resolve(params, probe, t, order, contour);
    const int eff_order = (params.eps == 0.0) ? 0 : order;

    // The y-independent part of the integrand (everything but the payoff
    // coefficient) is shared by every grid point; cache it per abscissa. The
    // starting point y0 plays the role of the pricing point y.
    const ModelParams from_y0(params.a, params.eps, params.beta, y0);
    std::unordered_map<uint64_t, std::vector<cd>> cache;
    std::vector<cd> nodes, dds;
    auto series_factor = [&](double xi) -> const std::vector<cd>& {
        uint64_t key;
        static_assert(sizeof(key) == sizeof(xi));
        std::memcpy(&key, &xi, sizeof(key));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const cd lambda{xi, rc.offset};
        std::vector<cd> vals(eff_order + 1);
        // dirac coefficient at y_target = 0 is 1/sqrt(2pi); divide it back out
        // so the cache holds coefficient-free factors.
        integrand_orders(from_y0, probe, t, eff_order, lambda, nodes, dds, vals);
        for (cd& v : vals) v *= kSqrt2Pi;
        return cache.emplace(key, std::move(vals)).first->second;
    };

    DensityGrid grid;
    grid.t = t;
    grid.y0 = y0;
    grid.y_values.assign(y_grid.begin(), y_grid.end());
    grid.p_orders.assign(order + 1, std::vector<double>(y_grid.size(), 0.0));

    for (size_t j = 0; j < y_grid.size(); ++j) {
        const double y_target = y_grid[j];
        ContourIntegrand f = [&](double xi, std::span<cd> out) {
            const std::vector<cd>& fac = series_factor(xi);
            const cd coef = std::exp(-kI * cd{xi, rc.offset} * y_target) / kSqrt2Pi;
            for (int n = 0; n <= eff_order; ++n) out[n] = coef * fac[n];
        };
        const QuadratureOutcome q =
            integrate_contour(f, eff_order + 1, rc.half_width, rc.rel_tol, rc.max_nodes);
        const PriceSeries series =
            assemble(PayoffSpec::dirac_at(y_target), t, order, eff_order, q);
        double acc = 0.0;
        for (int n = 0; n <= order; ++n) {
            acc += series.terms[n];
            grid.p_orders[n][j] = acc;
        }
    }
    return grid;
}

std::complex<double> SampledEta::transform(std::complex<double> mu) const {
    if (values.size() < 3 || dy <= 0.0)
        throw std::invalid_argument("SampledEta: need >= 3 samples on a positive-step grid");
    // Simpson; an even sample count gets a trapezoid patch on the last cell.
    cd acc{0.0, 0.0};
    const size_t n = values.size();
    const size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 2;
    for (size_t j = 0; j <= simpson_end; ++j) {
        double w = (j == 0 || j == simpson_end) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        acc += (w * dy / 3.0) * values[j] * std::exp(kI * mu * (y_lo + j * dy));
    }
    if (n % 2 == 0) {
        acc += 0.5 * dy *
               (values[n - 2] * std::exp(kI * mu * (y_lo + (n - 2) * dy)) +
                values[n - 1] * std::exp(kI * mu * (y_lo + (n - 1) * dy)));
    }
    return acc / kSqrt2Pi;
}

double u1_general_eta(const ModelParams& params, const SampledEta& eta, double t,
                      const PayoffSpec& payoff, const ContourSpec& contour) {
    contour.validate(payoff);
    if (!(t > 0.0)) throw std::invalid_argument("u1_general_eta: t must be positive");
    const double a = params.a;
    const double y = params.y;
    const double c0 = contour.offset;  // lambda_0 contour (carries the payoff transform)

    bool all_zero = true;
    for (double v : eta.values)
        if (v != 0.0) all_zero = false;
    if (all_zero || eta.values.empty()) return 0.0;

    // lambda_1 runs on the real line; its reach is set by the Gaussian decay
    // of e^{t phi}. lambda_0 = lambda_1 + delta + i c0 with delta limited by
    // the decay of the transform etahat.
    const double lam1_max = std::sqrt(2.0 * std::log(1e12) / (t * a * a)) + 10.0;
    const double h1 = 0.05;
    const double h0 = 0.05;

    // Empirical reach of etahat along the fixed-imaginary-part line.
    double hat_peak = 0.0;
    double delta_max = 5.0;
    for (double d = 0.0; d <= 400.0; d += 0.5) {
        const double m = std::abs(eta.transform(cd{d, c0}));
        hat_peak = std::max(hat_peak, m);
        if (m > 1e-13 * std::max(hat_peak, 1e-300)) delta_max = d + 1.0;
    }

    const long n1 = 2 * std::lround(lam1_max / h1 / 2.0);  // even panel count
    const long n0 = 2 * std::lround(delta_max / h0 / 2.0);

    // etahat on the uniform delta grid, reused for every lambda_1.
    std::vector<cd> hat(2 * n0 + 1);
    for (long m = -n0; m <= n0; ++m) hat[m + n0] = eta.transform(cd{m * h0, c0});

    auto simpson_w = [](long j, long n, double h) {
        if (j == -n || j == n) return h / 3.0;
        return ((j + n) % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    };

    cd total{0.0, 0.0};
    for (long j1 = -n1; j1 <= n1; ++j1) {
        const double xi1 = j1 * h1;
        const cd lam1{xi1, 0.0};
        const cd phi1 = phi0(lam1, a);
        const cd psi1 = std::exp(kI * lam1 * y) / kSqrt2Pi;
        const double w1 = simpson_w(j1, n1, h1);
        cd inner{0.0, 0.0};
        for (long m = -n0; m <= n0; ++m) {
            const cd lam0{xi1 + m * h0, c0};
            const cd phi0v = phi0(lam0, a);
            const cd nodes2[2] = {phi0v, phi1};
            const cd dd = divided_diff_exp(t, nodes2);
            inner += simpson_w(m, n0, h0) * payoff_coefficient(payoff, lam0) * chi(lam0) *
                     (hat[m + n0] / kSqrt2Pi) * dd;
        }
        total += w1 * psi1 * inner;
    }
    if (std::abs(total.imag()) > 1e-6 * std::max(std::abs(total.real()), 1e-12))
        throw ImaginaryResidualError("u1_general_eta: imaginary residual too large");
    return total.real();
}

}  // namespace lvsmile
