#pragma once

// Numeric evaluation of the finite-sample k-NN distance and entropy
// estimator bounds. Notation: γ_* and γ^* are the pointwise envelope values
// at the query point, D the space dimension, n the sample size.

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace klentropy::bounds {

/// A bound value before and after clamping into [0, 1] (clamping applies only
/// to probability bounds) and whether the inputs satisfy the bound's
/// hypotheses. Out-of-validity values are still computed so they can be
/// plotted, but must not be used as bounds.
struct BoundValue {
  double raw = 0.0;
  double clamped = 0.0;
  bool valid = true;
};

/// Upper tail: P[ε_k(x) > r] ≤ exp(-γ_* r^D n) (e γ_* r^D n / k)^k,
/// valid for (k / (γ_* n))^{1/D} ≤ r ≤ rho.
BoundValue concentration_upper(double r, int k, double n, int dim, double gamma_star,
                               double rho = std::numeric_limits<double>::infinity());

/// Lower tail: P[ε_k(x) ≤ r] ≤ (e γ^* r^D n / k)^{k γ_*/γ^*},
/// valid for 0 ≤ r ≤ min((k / (γ^* n))^{1/D}, rho).
BoundValue concentration_lower(double r, int k, double n, int dim, double gamma_star,
                               double gamma_sup,
                               double rho = std::numeric_limits<double>::infinity());

/// A statistic f of the k-NN distance with its derivative; f' > 0 on (0, ∞).
struct Statistic {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
};

Statistic log_statistic();
/// f(x) = x^α, α > 0.
Statistic power_statistic(double alpha);
/// f(x) = -x^α, α < 0 (increasing).
Statistic negative_power_statistic(double alpha);

/// Bound on E[f_+(ε_k(x))] by quadrature:
///   f_+((k/(γ_* n))^{1/D}) + C_T/n
///   + (e/k)^k / (D (n γ_*)^{1/D}) ∫_k^∞ e^{-y} y^{k+1/D-1} f'((y/(n γ_*))^{1/D}) dy.
/// Throws QuadratureError when the integral does not converge.
double expectation_upper_bound(const Statistic& stat, int k, double n, int dim, double gamma_star,
                               double C_T);

/// Bound on E[f_-(ε_k(x))] by quadrature:
///   f_-((k/(γ^* n))^{1/D}) + C_T/n
///   + (e n γ^*/k)^{k γ_*/γ^*} ∫_0^{(k/(γ^* n))^{1/D}} y^{D k γ_*/γ^*} f'(y) dy.
double expectation_lower_bound(const Statistic& stat, int k, double n, int dim, double gamma_star,
                               double gamma_sup, double C_T);

// Closed forms of the bounds above for the logarithm and power statistics
// (with C_T = 0).

/// (1/D) ln_+(k/(γ_* n)) + (e/k)^k Γ(k, k) / D.
double log_positive_part_bound(int k, double n, int dim, double gamma_star);
/// (1/D) (1 + ln_+(k/(γ_* n))), the relaxation via Γ(s, x) ≤ x^{s-1} e^{-x}.
double log_positive_part_bound_relaxed(int k, double n, int dim, double gamma_star);
/// (1/D) ln_-(k/(γ^* n)) + C_1.
double log_negative_part_bound(int k, double n, int dim, double gamma_star, double gamma_sup);

/// C_1 = γ^* e^{k γ_*/γ^*} / (D k γ_*).
double c1(int k, int dim, double gamma_star, double gamma_sup);
/// C_2 = 1 + 2α/D.
double c2(double alpha, int dim);
/// C_3 = 1 - α γ^* e^{k γ_*/γ^*} / (D k γ_* + α γ^*), for -D k γ_*/γ^* < α < 0.
/// (Exact value of the lower expectation bound for f = -x^α.)
double c3(double alpha, int k, int dim, double gamma_star, double gamma_sup);

/// (k/(γ_* n))^{α/D} + (e/k)^k α Γ(k + α/D, k) / (D (n γ_*)^{α/D}), α > 0.
double moment_bound_exact(double alpha, int k, double n, int dim, double gamma_star);

/// E[ε_k^α(x)] ≤ C_2 (k/(γ_* n))^{α/D} for α > 0 and
/// ≤ C_3 (k/(γ^* n))^{α/D} for -D k γ_*/γ^* < α < 0; 1 at α = 0.
/// Throws RangeError for α ≤ -D k γ_*/γ^*.
double moment_bound(double alpha, int k, double n, int dim, double gamma_star, double gamma_sup);

/// |E[H - Ĥ_k]| ≤ C_B (k/n)^{β/D}, C_B = (1 + c_D) C_2(β) C_β Γ_B.
/// Invalid (and +inf) when Γ_B is not finite. Throws DomainError for β ≤ 0.
BoundValue bias_bound(int k, double n, int dim, double beta, double C_beta, double Gamma_B,
                      double c_D);

/// Hölder-class version: C_H (n/k)^{-β/D}, C_H = (1 + c_D) C_2(β) Γ L D / (D + β).
BoundValue holder_bias_bound(int k, double n, int dim, double beta, double L, double Gamma,
                             double c_D);

/// Var[Ĥ_k] ≤ 5 (3 + k N_k)(3 + 64 k) M_4 / n; valid for n ≥ 16k.
BoundValue variance_bound(int k, double n, double N_k, double M_4);

/// M_ℓ ≤ C_M ℓ! / λ^ℓ. Throws RangeError for ℓ < 2 or λ ≤ 0.
double moment_ceiling(int ell, double lambda, double C_M);

/// Default fourth central moment ceiling: moment_ceiling(4, D k / (2 Γ_0), C_M).
/// +inf when Γ_0 is not finite.
double default_fourth_moment(int dim, int k, double Gamma_0, double C_M = 1.0);

/// Kissing number of R^D for D ≤ 8 (best known upper bound for D = 5, 6, 7).
/// Throws RangeError otherwise.
int kissing_number(int dim);

/// Bias² + variance.
BoundValue mse_bound(const BoundValue& bias, const BoundValue& variance);

/// max(1, round(n^{max(0, (2β - D)/(2β + D))})), capped at n - 1. Throws
/// RangeError for n < 2.
int optimal_k(double n, double beta, int dim);

/// One row of an exported bound curve.
struct CurvePoint {
  double parameter;
  BoundValue bound;
};

/// CSV with columns parameter,raw_bound,clamped_bound,validity_flag, preceded
/// by a `#schema:` comment line naming the bound.
void write_curve_csv(std::ostream& out, std::string_view bound_name,
                     const std::vector<CurvePoint>& curve);

}  // namespace klentropy::bounds
