#include "klentropy/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "klentropy/csv.hpp"
#include "klentropy/error.hpp"
#include "klentropy/quadrature.hpp"
#include "klentropy/special_functions.hpp"

namespace klentropy::bounds {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-8;

void require_common(int k, double n, int dim) {
  if (k < 1) throw RangeError("bound: k must be >= 1");
  if (!(n >= 1.0)) throw RangeError("bound: n must be >= 1");
  if (dim < 1) throw RangeError("bound: D must be >= 1");
}

void require_envelope(double gamma_star, double gamma_sup) {
  if (!(gamma_star > 0.0) || !(gamma_sup > 0.0)) {
    throw DomainError("bound: envelope values must be positive");
  }
  if (gamma_star > gamma_sup) throw DomainError("bound: need gamma_star <= gamma_sup");
}

double positive_part(double v) { return std::max(0.0, v); }
double negative_part(double v) { return -std::min(0.0, v); }

BoundValue probability(double raw, bool valid) {
  return {raw, std::clamp(raw, 0.0, 1.0), valid};
}

}  // namespace

BoundValue concentration_upper(double r, int k, double n, int dim, double gamma_star, double rho) {
  require_common(k, n, dim);
  if (!(gamma_star > 0.0)) throw DomainError("bound: gamma_star must be positive");
  if (!(r >= 0.0)) throw DomainError("concentration_upper: r must be nonnegative");
  const double threshold = std::pow(k / (gamma_star * n), 1.0 / dim);
  const double t = gamma_star * std::pow(r, dim) * n;
  const double raw = t == 0.0 ? 0.0 : std::exp(-t + k * (1.0 + std::log(t / k)));
  return probability(raw, r >= threshold && r <= rho);
}

BoundValue concentration_lower(double r, int k, double n, int dim, double gamma_star,
                               double gamma_sup, double rho) {
  require_common(k, n, dim);
  require_envelope(gamma_star, gamma_sup);
  if (!(r >= 0.0)) throw DomainError("concentration_lower: r must be nonnegative");
  const double threshold = std::min(std::pow(k / (gamma_sup * n), 1.0 / dim), rho);
  const double base = std::numbers::e * gamma_sup * std::pow(r, dim) * n / k;
  const double raw = base == 0.0 ? 0.0 : std::pow(base, k * gamma_star / gamma_sup);
  return probability(raw, r <= threshold);
}

Statistic log_statistic() {
  return {[](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }};
}

Statistic power_statistic(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("power_statistic: alpha must be positive");
  return {[alpha](double x) { return std::pow(x, alpha); },
          [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); }};
}

Statistic negative_power_statistic(double alpha) {
  if (!(alpha < 0.0)) throw DomainError("negative_power_statistic: alpha must be negative");
  return {[alpha](double x) { return -std::pow(x, alpha); },
          [alpha](double x) { return -alpha * std::pow(x, alpha - 1.0); }};
}

double expectation_upper_bound(const Statistic& stat, int k, double n, int dim, double gamma_star,
                               double C_T) {
  require_common(k, n, dim);
  if (!(gamma_star > 0.0)) throw DomainError("bound: gamma_star must be positive");
  const double scale = n * gamma_star;
  const double head = positive_part(stat.f(std::pow(k / scale, 1.0 / dim)));
  // (e/k)^k e^{-y} y^{k + 1/D - 1} evaluated in log space so large k neither
  // overflows nor underflows.
  const double log_prefactor = k * (1.0 - std::log(static_cast<double>(k))) -
                               std::log(static_cast<double>(dim)) - std::log(scale) / dim;
  const double exponent = k + 1.0 / dim - 1.0;
  auto integrand = [&](double y) {
    const double weight = std::exp(log_prefactor - y + exponent * std::log(y));
    return weight == 0.0 ? 0.0 : weight * stat.f_prime(std::pow(y / scale, 1.0 / dim));
  };
  const double tail = integrate_to_infinity(integrand, static_cast<double>(k), kRelTol).value;
  return head + C_T / n + tail;
}

double expectation_lower_bound(const Statistic& stat, int k, double n, int dim, double gamma_star,
                               double gamma_sup, double C_T) {
  require_common(k, n, dim);
  require_envelope(gamma_star, gamma_sup);
  const double t0 = std::pow(k / (gamma_sup * n), 1.0 / dim);
  const double head = negative_part(stat.f(t0));
  const double a = dim * k * gamma_star / gamma_sup;
  // With y = t0 s the prefactor (e n γ^*/k)^{a/D} t0^{a+1} collapses to e^{a/D} t0.
  auto integrand = [&](double s) {
    const double v = std::pow(s, a) * stat.f_prime(t0 * s);
    // Overflow only happens within a few ulps of s = 0, where an integrable
    // singularity contributes nothing at double precision.
    return std::isfinite(v) ? v : 0.0;
  };
  const double integral = integrate_endpoint_singular(integrand, 0.0, 1.0, kRelTol).value;
  return head + C_T / n + std::exp(a / dim) * t0 * integral;
}

double log_positive_part_bound(int k, double n, int dim, double gamma_star) {
  require_common(k, n, dim);
  const double kd = static_cast<double>(k);
  const double log_term = std::exp(kd * (1.0 - std::log(kd))) * upper_incomplete_gamma(kd, kd);
  return positive_part(std::log(k / (gamma_star * n))) / dim + log_term / dim;
}

double log_positive_part_bound_relaxed(int k, double n, int dim, double gamma_star) {
  require_common(k, n, dim);
  return (1.0 + positive_part(std::log(k / (gamma_star * n)))) / dim;
}

double log_negative_part_bound(int k, double n, int dim, double gamma_star, double gamma_sup) {
  require_common(k, n, dim);
  require_envelope(gamma_star, gamma_sup);
  return negative_part(std::log(k / (gamma_sup * n))) / dim + c1(k, dim, gamma_star, gamma_sup);
}

double c1(int k, int dim, double gamma_star, double gamma_sup) {
  require_envelope(gamma_star, gamma_sup);
  return gamma_sup * std::exp(k * gamma_star / gamma_sup) / (dim * k * gamma_star);
}

double c2(double alpha, int dim) { return 1.0 + 2.0 * alpha / dim; }

double c3(double alpha, int k, int dim, double gamma_star, double gamma_sup) {
  require_envelope(gamma_star, gamma_sup);
  const double limit = -dim * k * gamma_star / gamma_sup;
  if (!(alpha < 0.0) || !(alpha > limit)) {
    throw RangeError("C_3: alpha must lie in (" + std::to_string(limit) + ", 0)");
  }
  return 1.0 - alpha * gamma_sup * std::exp(k * gamma_star / gamma_sup) /
                   (dim * k * gamma_star + alpha * gamma_sup);
}

double moment_bound_exact(double alpha, int k, double n, int dim, double gamma_star) {
  require_common(k, n, dim);
  if (!(alpha > 0.0)) throw RangeError("moment_bound_exact: alpha must be positive");
  const double kd = static_cast<double>(k);
  const double head = std::pow(kd / (gamma_star * n), alpha / dim);
  const double tail = std::exp(kd * (1.0 - std::log(kd))) * alpha *
                      upper_incomplete_gamma(kd + alpha / dim, kd) /
                      (dim * std::pow(n * gamma_star, alpha / dim));
  return head + tail;
}

double moment_bound(double alpha, int k, double n, int dim, double gamma_star, double gamma_sup) {
  require_common(k, n, dim);
  require_envelope(gamma_star, gamma_sup);
  if (alpha == 0.0) return 1.0;
  if (alpha > 0.0) return c2(alpha, dim) * std::pow(k / (gamma_star * n), alpha / dim);
  return c3(alpha, k, dim, gamma_star, gamma_sup) * std::pow(k / (gamma_sup * n), alpha / dim);
}

BoundValue bias_bound(int k, double n, int dim, double beta, double C_beta, double Gamma_B,
                      double c_D) {
  require_common(k, n, dim);
  if (!(beta > 0.0)) throw DomainError("bias_bound: beta must be positive");
  const double c_b = (1.0 + c_D) * c2(beta, dim) * C_beta * Gamma_B;
  const double raw = c_b * std::pow(k / n, beta / dim);
  return {raw, raw, std::isfinite(Gamma_B)};
}

BoundValue holder_bias_bound(int k, double n, int dim, double beta, double L, double Gamma,
                             double c_D) {
  require_common(k, n, dim);
  if (!(beta > 0.0)) throw DomainError("holder_bias_bound: beta must be positive");
  const double c_h = (1.0 + c_D) * c2(beta, dim) * Gamma * L * dim / (dim + beta);
  const double raw = c_h * std::pow(n / k, -beta / dim);
  return {raw, raw, std::isfinite(Gamma) && beta <= 2.0};
}

BoundValue variance_bound(int k, double n, double N_k, double M_4) {
  if (k < 1) throw RangeError("variance_bound: k must be >= 1");
  if (!(n >= 1.0)) throw RangeError("variance_bound: n must be >= 1");
  const double raw = 5.0 * (3.0 + k * N_k) * (3.0 + 64.0 * k) * M_4 / n;
  return {raw, raw, n >= 16.0 * k && std::isfinite(M_4)};
}

double moment_ceiling(int ell, double lambda, double C_M) {
  if (ell < 2) throw RangeError("moment_ceiling: ell must be >= 2");
  if (!(lambda > 0.0)) throw RangeError("moment_ceiling: lambda must be positive");
  return C_M * std::exp(log_gamma(ell + 1.0) - ell * std::log(lambda));
}

double default_fourth_moment(int dim, int k, double Gamma_0, double C_M) {
  if (!std::isfinite(Gamma_0)) return kInf;
  return moment_ceiling(4, dim * k / (2.0 * Gamma_0), C_M);
}

int kissing_number(int dim) {
  static constexpr int table[] = {2, 6, 12, 24, 44, 78, 134, 240};
  if (dim < 1 || dim > 8) throw RangeError("kissing_number: only tabulated for 1 <= D <= 8");
  return table[dim - 1];
}

BoundValue mse_bound(const BoundValue& bias, const BoundValue& variance) {
  const double raw = bias.raw * bias.raw + variance.raw;
  return {raw, raw, bias.valid && variance.valid};
}

int optimal_k(double n, double beta, int dim) {
  if (!(n >= 2.0)) throw RangeError("optimal_k: n must be >= 2");
  if (dim < 1) throw RangeError("optimal_k: D must be >= 1");
  const double exponent = std::max(0.0, (2.0 * beta - dim) / (2.0 * beta + dim));
  const long k = std::lround(std::pow(n, exponent));
  // Leave-one-out estimates need k ≤ n - 1.
  return static_cast<int>(std::clamp<long>(k, 1, static_cast<long>(n) - 1));
}

void write_curve_csv(std::ostream& out, std::string_view bound_name,
                     const std::vector<CurvePoint>& curve) {
  out << "#schema: " << bound_name << " parameter,raw_bound,clamped_bound,validity_flag\n";
  out << "parameter,raw_bound,clamped_bound,validity_flag\n";
  for (const auto& point : curve) {
    out << format_real(point.parameter) << ',' << format_real(point.bound.raw) << ','
        << format_real(point.bound.clamped) << ',' << (point.bound.valid ? 1 : 0) << '\n';
  }
}

}  // namespace klentropy::bounds
