#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>

#include "klentropy/dataset.hpp"
#include "klentropy/rng.hpp"

namespace klentropy {

enum class Family { uniform_cube, uniform_torus, gaussian, sine_bump };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// A sampling distribution with a closed-form entropy.
///
///   uniform_cube   density 1 on [0,1]^D, euclidean
///   uniform_torus  density 1 on the flat torus [0,1)^D
///   gaussian       isotropic N(0, σ² I_D), euclidean
///   sine_bump      ∏_j (π/2) sin(π x_j) on (0,1)^D, euclidean; vanishes on
///                  the boundary of the cube (Lipschitz, β = 1)
struct DistributionSpec {
  Family family = Family::uniform_torus;
  int dim = 1;
  double sigma = 1.0;

  static DistributionSpec uniform_cube(int dim) { return {Family::uniform_cube, dim, 1.0}; }
  static DistributionSpec uniform_torus(int dim) { return {Family::uniform_torus, dim, 1.0}; }
  static DistributionSpec gaussian(int dim, double sigma = 1.0) {
    return {Family::gaussian, dim, sigma};
  }
  static DistributionSpec sine_bump(int dim) { return {Family::sine_bump, dim, 1.0}; }

  /// Throws DomainError on D < 1 or σ ≤ 0.
  void validate() const;
  MetricSpace space() const;
};

/// n IID draws, deterministic in (spec, n, seed).
Dataset sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed);
Dataset sample(const DistributionSpec& dist, std::size_t n, Rng& rng);

/// n draws of (X, Y), each one-dimensional standard normal with correlation rho.
std::pair<Dataset, Dataset> sample_gaussian_pair(std::size_t n, double rho, std::uint64_t seed);

/// Differential entropy in nats.
double true_entropy(const DistributionSpec& dist);

double density(const DistributionSpec& dist, std::span<const double> x);

/// Full-dimension envelope data: for r ≤ rho,
///   gamma_star(x) r^D ≤ P(B(x, r)) ≤ gamma_sup(x) r^D.
/// Expectations that diverge are reported as +inf rather than truncated.
///
///   uniform_torus  γ_* = γ^* = c_D, rho = 1/2 (exact ball measure)
///   uniform_cube   γ_* = c_D 2^{-D}, γ^* = c_D, rho = 1/2 (orthant argument)
///   gaussian       γ_*(x) = c_D φ(|x| + ρ), γ^*(x) = c_D φ(max(|x| - ρ, 0)),
///                  rho = σ; Γ_0 = +inf globally, Γ_B = +inf
///   sine_bump      per-coordinate min / max of the density over the inward
///                  orthant box / the enclosing box, rho = 1/4; Γ_0 = +inf
struct EnvelopeData {
  double rho = 0.0;
  std::function<double(std::span<const double>)> gamma_star;
  std::function<double(std::span<const double>)> gamma_sup;
  /// sup_x γ^*(x)/γ_*(x).
  double Gamma_0 = 0.0;
  /// sup of the ratio over |x| ≤ R (gaussian only; equals Gamma_0 otherwise).
  std::function<double(double)> Gamma_0_truncated;
  /// E[γ^*(X)/γ_*(X)].
  double Gamma = 0.0;
  /// β ↦ E[γ_*(X)^{-(β+D)/D}].
  std::function<double(double)> Gamma_B;
  /// λ ↦ E[γ_*(X)^{-λ/D}].
  std::function<double(double)> Gamma_star_lambda;
  /// λ ↦ E[γ^*(X)^{λ/D}].
  std::function<double(double)> Gamma_sup_lambda;
  /// Tail constant of the expectation bounds; +inf when not known for the family.
  double C_T = 0.0;
};

EnvelopeData envelopes(const DistributionSpec& dist);

}  // namespace klentropy
