#include "lvsmile/model.hpp"

#include <cmath>
#include <stdexcept>

namespace lvsmile {

ModelParams::ModelParams(double a_, double eps_, double beta_, double y_)
    : a(a_), eps(eps_), beta(beta_), y(y_) {
    if (!(a > 0.0)) throw std::invalid_argument("ModelParams: a must be positive");
    if (!(eps >= 0.0)) throw std::invalid_argument("ModelParams: eps must be non-negative");
    if (!(beta <= 0.0)) throw std::invalid_argument("ModelParams: beta must be non-positive");
    if (!std::isfinite(y)) throw std::invalid_argument("ModelParams: y must be finite");
}

double ModelParams::local_variance(double log_level) const {
    return a * a + eps * std::exp(beta * log_level);
}

std::complex<double> phi0(std::complex<double> lambda, double a) {
    return 0.5 * a * a * (-lambda * lambda - std::complex<double>(0.0, 1.0) * lambda);
}

std::complex<double> chi(std::complex<double> lambda) {
    return 0.5 * (-lambda * lambda - std::complex<double>(0.0, 1.0) * lambda);
}

double eta_norm(double beta, double y0) {
    if (!(beta < 0.0)) throw std::invalid_argument("eta_norm: beta must be negative");
    return std::exp(beta * y0) / std::sqrt(-2.0 * beta);
}

double validity_threshold(const ModelParams& params) {
    if (!(params.eps > 0.0))
        throw std::invalid_argument("validity_threshold: eps must be positive (threshold is -inf at eps = 0)");
    if (!(params.beta < 0.0))
        throw std::invalid_argument("validity_threshold: beta must be negative");
    return std::log(params.a * params.a * std::sqrt(-2.0 * params.beta) / params.eps) / params.beta;
}

bool check_series_bound(const ModelParams& params, double y0) {
    if (params.eps == 0.0) return true;
    if (params.beta == 0.0) return false;  // whole-line norm of eta == 1 is infinite
    // inclusive boundary, with slack for the exp/log round trip so that the
    // equality case eps == a^2/||eta|| lands on the true side
    const double bound = params.a * params.a / eta_norm(params.beta, y0);
    return params.eps <= bound * (1.0 + 1e-13);
}

}  // namespace lvsmile
