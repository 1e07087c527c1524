#include "klentropy/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "klentropy/error.hpp"

namespace klentropy {
namespace {

constexpr unsigned kMaxDepth = 30;

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol) {
  if (a == b) return {};
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, kMaxDepth, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * std::max(l1, 1e-300) * 10.0) {
    throw QuadratureError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] did not reach relative tolerance " + std::to_string(rel_tol) +
                          " (error estimate " + std::to_string(error) + ")");
  }
  return {value, error};
}

QuadratureResult integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                             double b, double rel_tol) {
  if (a == b) return {};
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, a, b, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * std::max(l1, 1e-300) * 10.0) {
    throw QuadratureError("tanh-sinh quadrature on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] did not converge (error estimate " +
                          std::to_string(error) + ")");
  }
  return {value, error};
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double rel_tol, double truncation_ratio) {
  // Scan outwards for the peak and the point where the integrand has decayed.
  double width = std::max(1.0, std::abs(a));
  double peak = std::abs(f(a));
  double x = a;
  double upper = a;
  for (int i = 0; i < 2000; ++i) {
    x += width;
    const double v = std::abs(f(x));
    peak = std::max(peak, v);
    upper = x;
    if (v <= truncation_ratio * peak && v == v) break;
    if (i > 8) width *= 1.25;
  }
  if (!(peak > 0.0)) return {};
  if (!(std::abs(f(upper)) <= truncation_ratio * peak)) {
    throw QuadratureError("integrate_to_infinity: integrand does not decay");
  }
  // Split at roughly geometric breakpoints so the peak region is resolved.
  QuadratureResult total;
  double lo = a;
  double step = std::max((upper - a) / 64.0, 1e-12);
  while (lo < upper) {
    const double hi = std::min(upper, lo + step);
    const auto piece = integrate(f, lo, hi, rel_tol);
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
    lo = hi;
  }
  return total;
}

}  // namespace klentropy
