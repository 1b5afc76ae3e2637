#include "lvsmile/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lvsmile/errors.hpp"

namespace lvsmile {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr std::complex<double> kI{0.0, 1.0};

// Minimum clearance between a call contour and the pole strip edge at -1.
constexpr double kCallStripMargin = 1e-9;
constexpr double kBadOffsetClearance = 0.01;
constexpr double kNudgeStep = 0.05;
}  // namespace

void ContourSpec::validate(const PayoffSpec& payoff) const {
    if (payoff.kind == PayoffKind::call && !(offset < -1.0))
        throw ContourViolationError("ContourSpec: call contour requires offset < -1");
    if (half_width && !(*half_width > 0.0))
        throw std::invalid_argument("ContourSpec: half_width must be positive");
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("ContourSpec: rel_tol must be positive");
    if (max_nodes < 17)
        throw std::invalid_argument("ContourSpec: max_nodes too small");
}

ContourSpec ContourSpec::for_payoff(const PayoffSpec& payoff) {
    ContourSpec spec;
    spec.offset = (payoff.kind == PayoffKind::call) ? -1.5 : 0.0;
    return spec;
}

std::complex<double> payoff_coefficient(const PayoffSpec& payoff, std::complex<double> lambda) {
    if (payoff.kind == PayoffKind::dirac) {
        return std::exp(-kI * lambda * payoff.y_target()) / kSqrt2Pi;
    }
    if (!(lambda.imag() < -1.0))
        throw ContourViolationError("payoff_coefficient: call transform requires Im(lambda) < -1");
    const double k = payoff.log_strike();
    // Finite on the strip: i lambda + lambda^2 has roots only at 0 and -i.
    return -std::exp(k - kI * k * lambda) / (kSqrt2Pi * (kI * lambda + lambda * lambda));
}

double coefficient_decay_bound(const PayoffSpec& payoff, const ContourSpec& contour) {
    contour.validate(payoff);
    if (payoff.kind == PayoffKind::dirac) return 1.0 / kSqrt2Pi;
    if (!contour.half_width)
        throw std::invalid_argument("coefficient_decay_bound: half_width required");
    const double k = payoff.log_strike();
    const double c = contour.offset;
    const double hw = *contour.half_width;
    // |e^{k - i k lambda}| = e^{k(1+c)} on the contour, and
    // |i lambda + lambda^2| >= Re(lambda^2 + i lambda) = xi^2 - c^2 - c.
    const double denom = hw * hw - c * c - c;
    if (!(denom > 0.0))
        throw std::invalid_argument("coefficient_decay_bound: half_width too small for offset");
    return std::exp(k * (1.0 + c)) / (kSqrt2Pi * denom);
}

std::vector<double> bad_offsets(int order, double beta) {
    std::vector<double> out;
    if (order < 1 || beta == 0.0) return out;
    for (int j = 0; j < order; ++j) {
        for (int k = j + 1; k <= order; ++k) {
            out.push_back(-(1.0 - (j + k) * beta) / 2.0);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              out.end());
    return out;
}

double resolve_offset(double offset, int order, double beta, PayoffKind kind) {
    const std::vector<double> bad = bad_offsets(order, beta);
    auto clear_of_bad = [&](double c) {
        for (double b : bad)
            if (std::abs(c - b) < kBadOffsetClearance) return false;
        return true;
    };
    auto admissible = [&](double c) {
        if (kind == PayoffKind::call) return c < -1.0 - kCallStripMargin;
        return true;
    };
    if (clear_of_bad(offset)) return offset;
    for (int step = 1; step <= 8; ++step) {
        for (double cand : {offset - step * kNudgeStep, offset + step * kNudgeStep}) {
            if (clear_of_bad(cand) && admissible(cand)) return cand;
        }
    }
    throw std::invalid_argument("resolve_offset: no clear offset near requested value");
}

}  // namespace lvsmile
