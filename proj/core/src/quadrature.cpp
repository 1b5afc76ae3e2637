#include "lvsmile/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lvsmile/errors.hpp"

namespace lvsmile {

namespace {

using cd = std::complex<double>;

constexpr int kPanelN = 16;  // 17-point rule, embedded 9-point on even nodes
constexpr int kPanelPoints = kPanelN + 1;
constexpr int kInitialPanels = 16;
constexpr double kAbsFloor = 1e-14;
constexpr int kMaxPasses = 3;

struct CcRule {
    double node[kPanelPoints];    // cos(j pi / 16), descending from +1 to -1
    double w16[kPanelPoints];
    double w8[kPanelPoints / 2 + 1];
    CcRule() {
        for (int j = 0; j <= kPanelN; ++j) node[j] = std::cos(j * std::numbers::pi / kPanelN);
        fill_weights(kPanelN, w16);
        fill_weights(kPanelN / 2, w8);
    }
    static void fill_weights(int n, double* w) {
        for (int j = 0; j <= n; ++j) {
            const double theta = j * std::numbers::pi / n;
            double s = 1.0;
            for (int k = 1; k <= n / 2; ++k) {
                const double b = (k == n / 2) ? 1.0 : 2.0;
                s -= b * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
            }
            const double c = (j == 0 || j == n) ? 1.0 : 2.0;
            w[j] = c * s / n;
        }
    }
};

const CcRule& cc_rule() {
    static const CcRule rule;
    return rule;
}

struct PassState {
    const ContourIntegrand* f;
    int n_comp;
    double total_width;
    double abs_tol;
    long max_nodes;
    long nodes_used;
    double err_accum;
    std::vector<cd> acc;      // running component integrals
    std::vector<cd> scratch;  // one node evaluation
    std::vector<cd> panel16;  // per-panel component sums
    std::vector<cd> panel8;
    double panel_mag;         // integral of sum_c |f_c| over the panel
};

// Evaluates one panel; returns the error estimate of the component sum.
double eval_panel(PassState& st, double lo, double hi) {
    const CcRule& rule = cc_rule();
    const double mid = 0.5 * (lo + hi);
    const double rad = 0.5 * (hi - lo);
    for (int c = 0; c < st.n_comp; ++c) {
        st.panel16[c] = cd{0.0, 0.0};
        st.panel8[c] = cd{0.0, 0.0};
    }
    st.panel_mag = 0.0;
    for (int j = 0; j <= kPanelN; ++j) {
        const double xi = mid + rad * rule.node[j];
        (*st.f)(xi, std::span<cd>(st.scratch.data(), st.n_comp));
        const double wj = rule.w16[j] * rad;
        const bool on8 = (j % 2 == 0);
        const double wj8 = on8 ? rule.w8[j / 2] * rad : 0.0;
        for (int c = 0; c < st.n_comp; ++c) {
            st.panel16[c] += wj * st.scratch[c];
            st.panel_mag += wj * std::abs(st.scratch[c]);
            if (on8) st.panel8[c] += wj8 * st.scratch[c];
        }
    }
    st.nodes_used += kPanelPoints;
    double err = 0.0;
    for (int c = 0; c < st.n_comp; ++c) err += std::abs(st.panel16[c] - st.panel8[c]);
    return err;
}

void refine(PassState& st, double lo, double hi, int depth) {
    const double err = eval_panel(st, lo, hi);
    const double width = hi - lo;
    // the second acceptance clause is the round-off floor: a panel cannot be
    // resolved below machine precision of its own magnitude
    if (err <= st.abs_tol * (width / st.total_width) || err <= 2e-16 * st.panel_mag ||
        depth >= 48) {
        for (int c = 0; c < st.n_comp; ++c) st.acc[c] += st.panel16[c];
        st.err_accum += err;
        return;
    }
    if (st.nodes_used + 2 * kPanelPoints > st.max_nodes) {
        throw QuadratureError("integrate_contour: node budget exhausted before tolerance");
    }
    const double mid = 0.5 * (lo + hi);
    refine(st, lo, mid, depth + 1);
    refine(st, mid, hi, depth + 1);
}

double component_mag(std::span<const cd> v) {
    double s = 0.0;
    for (const cd& x : v) s += std::abs(x);
    return s;
}

}  // namespace

QuadratureOutcome integrate_contour(const ContourIntegrand& f, int n_components,
                                    double half_width, double rel_tol, long max_nodes) {
    if (n_components < 1) throw std::invalid_argument("integrate_contour: n_components < 1");
    if (!(half_width > 0.0)) throw std::invalid_argument("integrate_contour: half_width <= 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate_contour: rel_tol <= 0");

    PassState st;
    st.f = &f;
    st.n_comp = n_components;
    st.total_width = 2.0 * half_width;
    st.max_nodes = max_nodes;
    st.nodes_used = 0;
    st.scratch.assign(n_components, cd{});
    st.panel16.assign(n_components, cd{});
    st.panel8.assign(n_components, cd{});

    // Coarse scale estimate for the first pass tolerance.
    double coarse_mag = 0.0;
    {
        st.abs_tol = std::numeric_limits<double>::infinity();
        st.acc.assign(n_components, cd{});
        st.err_accum = 0.0;
        for (int p = 0; p < kInitialPanels; ++p) {
            const double lo = -half_width + st.total_width * p / kInitialPanels;
            const double hi = -half_width + st.total_width * (p + 1) / kInitialPanels;
            eval_panel(st, lo, hi);
            for (int c = 0; c < n_components; ++c) st.acc[c] += st.panel16[c];
        }
        coarse_mag = component_mag(st.acc);
    }

    QuadratureOutcome out;
    double abs_tol = std::max(rel_tol * coarse_mag, kAbsFloor);
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        st.abs_tol = abs_tol;
        st.acc.assign(n_components, cd{});
        st.err_accum = 0.0;
        for (int p = 0; p < kInitialPanels; ++p) {
            const double lo = -half_width + st.total_width * p / kInitialPanels;
            const double hi = -half_width + st.total_width * (p + 1) / kInitialPanels;
            refine(st, lo, hi, 0);
        }
        out.components = st.acc;
        out.nodes_used = st.nodes_used;
        out.abs_tol = abs_tol;
        out.err_estimate = st.err_accum;
        // The tolerance was set from an estimate of the integral's size; stop
        // once the realized size agrees with the one the pass assumed.
        const double desired = std::max(rel_tol * component_mag(st.acc), kAbsFloor);
        if (desired > 0.25 * abs_tol && desired < 4.0 * abs_tol) break;
        abs_tol = desired;
    }
    return out;
}

}  // namespace lvsmile
