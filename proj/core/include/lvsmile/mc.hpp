#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lvsmile/model.hpp"

namespace lvsmile {

// Euler-Maruyama simulation config. Reproducibility contract: results are a
// pure function of (config, model, t, strikes) — identical bits for any
// worker count. Draws come from mt19937_64 streams seeded per 8192-path
// chunk with (seed, chunk index), mapped to normals by the Moro (1995)
// inverse-CDF; chunks are reduced in index order.
struct McConfig {
    long n_paths = 200000;
    double dt = 1e-3;        // years; effective step is t / round(t / dt)
    std::uint64_t seed = 1;
    bool antithetic = false; // pairs (z, -z); n_paths must be even
    int threads = 0;         // 0 = hardware concurrency
};

struct McEstimate {
    double price = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
};

struct SensitivityEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

using EtaFn = std::function<double(double)>;

// Call price by simulating dY = -1/2 (a^2 + eps eta(Y)) dt + sqrt(.) dW from
// params.y and averaging (e^{Y_t} - e^k)^+.
McEstimate simulate_call(const ModelParams& params, double t, double k_logstrike,
                         const McConfig& cfg);

// Same paths, several strikes: one estimate per strike from a single sweep.
std::vector<McEstimate> simulate_calls(const ModelParams& params, double t,
                                       std::span<const double> k_logstrikes,
                                       const McConfig& cfg);

// General-perturbation variant (eta replaces e^{beta y}; eta >= 0).
std::vector<McEstimate> simulate_calls_eta(double a, double eps, const EtaFn& eta, double y,
                                           double t, std::span<const double> k_logstrikes,
                                           const McConfig& cfg);

// Common-random-numbers forward difference
//   (price(eps + d_eps) - price(eps)) / d_eps,
// both legs on identical draws, with the standard error of the pathwise
// difference (not of the two prices separately).
SensitivityEstimate eps_sensitivity(const ModelParams& params, double t, double k_logstrike,
                                    const McConfig& cfg, double d_eps);

SensitivityEstimate eps_sensitivity_eta(double a, double eps, const EtaFn& eta, double y,
                                        double t, double k_logstrike, const McConfig& cfg,
                                        double d_eps);

// Moro's inverse normal CDF (the generator's normal map; exposed for tests).
double inverse_normal_cdf(double u);

}  // namespace lvsmile
