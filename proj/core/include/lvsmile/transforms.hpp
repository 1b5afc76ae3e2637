#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace lvsmile {

enum class PayoffKind { call, dirac };

// Payoff in log coordinates: call h(y) = (e^y - e^k)^+ with log strike k,
// or a Dirac delta at y_target (used for transition densities).
struct PayoffSpec {
    PayoffKind kind;
    double point;  // log strike for call, y_target for dirac

    static PayoffSpec call_at(double log_strike) { return {PayoffKind::call, log_strike}; }
    static PayoffSpec dirac_at(double y_target) { return {PayoffKind::dirac, y_target}; }

    double log_strike() const { return point; }
    double y_target() const { return point; }
};

// Horizontal integration contour Im(lambda) = offset together with the
// truncation and tolerance budget for the lambda integral.
struct ContourSpec {
    double offset = -1.5;                   // call default; must be < -1 for calls
    std::optional<double> half_width = {};  // truncation of Re(lambda); empty = auto
    double rel_tol = 1e-10;
    long max_nodes = 4000000;

    void validate(const PayoffSpec& payoff) const;

    static ContourSpec for_payoff(const PayoffSpec& payoff);
};

// Fourier coefficient (psi_lambda, h) of the payoff.
//   call:  -e^{k - i k lambda} / (sqrt(2 pi) (i lambda + lambda^2)), Im(lambda) < -1
//   dirac: e^{-i lambda y_target} / sqrt(2 pi)
// Throws ContourViolationError for a call coefficient off its strip.
std::complex<double> payoff_coefficient(const PayoffSpec& payoff, std::complex<double> lambda);

// Upper bound on |payoff_coefficient| at Re(lambda) = +-half_width on the
// contour; used to size truncation widths. For the dirac payoff the
// coefficient has unit modulus up to 1/sqrt(2 pi) (no decay of its own).
double coefficient_decay_bound(const PayoffSpec& payoff, const ContourSpec& contour);

// Offsets c where a shifted-node pair phi_{lambda - i k beta}, phi_{lambda - i j beta}
// collides at xi = 0: c = -(1 - (j+k) beta)/2 for 0 <= j < k <= order.
// Individual bracket terms have removable singularities there; the set is
// returned sorted and deduplicated.
std::vector<double> bad_offsets(int order, double beta);

// Nudges `offset` away from any bad offset closer than 0.01 (in +-0.05 steps,
// keeping a call contour strictly below -1). Identity when already clear.
double resolve_offset(double offset, int order, double beta, PayoffKind kind);

}  // namespace lvsmile
