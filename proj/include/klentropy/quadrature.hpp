#pragma once

#include <functional>

namespace klentropy {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] with interval
/// bisection until the error estimate is below rel_tol times the L1 norm.
/// Throws QuadratureError when the tolerance cannot be met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-8);

/// Tanh-sinh integration for integrands with integrable endpoint
/// singularities (e.g. x^{-0.7} near 0). f is never evaluated at a or b.
QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                             double b, double rel_tol = 1e-8);

/// ∫_a^∞ f for integrands that decay eventually. The upper limit is pushed out
/// by doubling until f drops below truncation_ratio times the largest value
/// seen, then the finite interval is integrated in geometric pieces.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double rel_tol = 1e-8, double truncation_ratio = 1e-16);

}  // namespace klentropy
