#pragma once

namespace klentropy {

/// ψ(x) for x > 0. Recurrence up to x ≥ 6, then the asymptotic series.
/// Throws DomainError for x ≤ 0 or non-finite x.
double digamma(double x);

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt for s > 0, x ≥ 0.
///
/// Power series for the lower function when x < s + 1, Lentz continued
/// fraction otherwise; both run to relative tolerance 1e-14 with at most 500
/// iterations.
double upper_incomplete_gamma(double s, double x);

/// Volume of the Euclidean unit ball in R^D, π^{D/2} / Γ(D/2 + 1).
double unit_ball_volume(int dim);

}  // namespace klentropy
