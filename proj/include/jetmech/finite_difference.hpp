#pragma once

// Finite-difference oracles for checking the automatic derivatives.
//
// Only Expression::evaluate is used here, so these results are independent of
// the forward-mode path they are compared against.

#include <span>
#include <string>

#include "jetmech/expr.hpp"

namespace jetmech {

/// Central-difference step for the gradient oracle: h = 1e-6 * max(1, |x|).
inline constexpr double kGradientStep = 1e-6;

/// Step for the Hessian oracle: h = 1e-4 * max(1, |x|). Second differences
/// lose two orders of magnitude to rounding, so the gradient step is too small.
inline constexpr double kHessianStep = 1e-4;

Vector numeric_gradient(const Expression& e, std::span<const std::string> vars,
                        const Bindings& b, double rel_step = kGradientStep);

Matrix numeric_hessian(const Expression& e, std::span<const std::string> vars,
                       const Bindings& b, double rel_step = kHessianStep);

}  // namespace jetmech
