#include "klentropy/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "klentropy/error.hpp"

namespace klentropy {
namespace {

constexpr double kSeriesTolerance = 1e-14;
constexpr int kMaxIterations = 500;

// Γ(s) - γ(s, x); valid for x < s + 1.
double upper_gamma_by_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n <= kMaxIterations; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kSeriesTolerance) {
      const double lower = std::exp(s * std::log(x) - x) * sum;
      return std::exp(log_gamma(s)) - lower;
    }
  }
  throw Error("upper_incomplete_gamma: series did not converge for s=" + std::to_string(s) +
              ", x=" + std::to_string(x));
}

// Modified Lentz evaluation of the continued fraction for Γ(s, x); x ≥ s + 1.
double upper_gamma_by_fraction(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kSeriesTolerance) {
      return std::exp(s * std::log(x) - x) * h;
    }
  }
  throw Error("upper_incomplete_gamma: continued fraction did not converge for s=" +
              std::to_string(s) + ", x=" + std::to_string(x));
}

}  // namespace

double digamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("digamma: argument must be positive and finite, got " + std::to_string(x));
  }
  double shift = 0.0;
  while (x < 6.0) {
    shift += 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli-number coefficients B_{2j} / (2j), j = 1..8.
  const double tail =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 -
                                                      inv2 * (1.0 / 12 - inv2 * 3617.0 / 8160)))))));
  return std::log(x) - 0.5 * inv - tail - shift;
}

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double upper_incomplete_gamma(double s, double x) {
  if (!std::isfinite(s) || s <= 0.0 || !(x >= 0.0)) {
    throw DomainError("upper_incomplete_gamma: need s > 0 and x >= 0, got s=" + std::to_string(s) +
                      ", x=" + std::to_string(x));
  }
  if (x == 0.0) return std::exp(log_gamma(s));
  if (std::isinf(x)) return 0.0;
  return x < s + 1.0 ? upper_gamma_by_series(s, x) : upper_gamma_by_fraction(s, x);
}

double unit_ball_volume(int dim) {
  if (dim < 0) throw DomainError("unit_ball_volume: negative dimension");
  // V_D = V_{D-2} * 2π / D keeps V_1 = 2 and V_2 = π exact.
  double v = (dim % 2 == 0) ? 1.0 : 2.0;
  for (int d = (dim % 2 == 0) ? 2 : 3; d <= dim; d += 2) v *= 2.0 * std::numbers::pi / d;
  return v;
}

}  // namespace klentropy
