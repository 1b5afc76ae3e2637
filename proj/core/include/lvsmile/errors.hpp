#pragma once

#include <stdexcept>
#include <string>

namespace lvsmile {

// Numerical failures (quadrature, root finding, ...). Input/domain errors
// use std::invalid_argument throughout.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature could not reach the requested tolerance within the
// node budget.
class QuadratureError : public NumericalError {
public:
    explicit QuadratureError(const std::string& what) : NumericalError(what) {}
};

// A contour price came back with a non-negligible imaginary part; signals a
// contour or truncation bug rather than an unlucky input.
class ImaginaryResidualError : public NumericalError {
public:
    explicit ImaginaryResidualError(const std::string& what) : NumericalError(what) {}
};

// Black-Scholes vega fell below the usable floor (deep wings at tiny
// maturity); the smile coefficients would be meaningless there.
class VegaUnderflowError : public NumericalError {
public:
    explicit VegaUnderflowError(const std::string& what) : NumericalError(what) {}
};

// Requested a call-payoff transform off its strip of analyticity.
class ContourViolationError : public std::invalid_argument {
public:
    explicit ContourViolationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace lvsmile
