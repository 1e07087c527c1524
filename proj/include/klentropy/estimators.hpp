#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "klentropy/dataset.hpp"
#include "klentropy/distributions.hpp"
#include "klentropy/knn_index.hpp"

namespace klentropy {

/// Kozachenko-Leonenko entropy estimate in nats.
struct EntropyEstimate {
  double value = 0.0;
  std::size_t n = 0;
  int k = 0;
  /// Points left out of the log-distance average because ε_k = 0
  /// (always 0 under DuplicatePolicy::strict).
  std::size_t dropped_points = 0;
};

/// Ĥ_k = ψ(n) - ψ(k) + ln c_D + (D/m) Σ ln ε_k(X_i), with leave-one-out
/// distances of the n samples. m = n in strict mode; in lenient mode the
/// points with ε_k = 0 are dropped and m counts the rest.
///
/// Throws RangeError unless n ≥ 2 and 1 ≤ k ≤ n - 1, ZeroDistanceError on a
/// zero distance in strict mode (or when every point is dropped).
EntropyEstimate kl_entropy(const Dataset& data, int k,
                           DuplicatePolicy policy = DuplicatePolicy::strict,
                           KnnBackend backend = KnnBackend::automatic);
EntropyEstimate kl_entropy(const KnnIndex& index, int k,
                           DuplicatePolicy policy = DuplicatePolicy::strict);

/// The estimator applied to precomputed leave-one-out distances. The sum runs
/// in index order.
EntropyEstimate kl_entropy_from_distances(std::span<const double> eps, const MetricSpace& space,
                                          int k, DuplicatePolicy policy);

struct MutualInformationEstimate {
  double value = 0.0;
  EntropyEstimate h_x;
  EntropyEstimate h_y;
  EntropyEstimate h_joint;
  /// Share of points whose joint k-NN index set equals both marginal ones.
  double identical_neighbor_fraction = 0.0;
  /// Set when identical_neighbor_fraction ≥ 0.99, the signature of Y being a
  /// deterministic function of X (the joint law then has no density).
  bool degenerate = false;
};

/// Î(X;Y) = Ĥ(X) + Ĥ(Y) - Ĥ(X,Y). The joint sample concatenates coordinates
/// and uses the Euclidean metric on the product (torus × torus gives a torus).
/// Throws DimensionMismatch when the sample sizes differ.
MutualInformationEstimate mutual_information(const Dataset& x, const Dataset& y, int k,
                                             DuplicatePolicy policy = DuplicatePolicy::strict);

struct SmoothedDensity {
  double value = 0.0;
  /// Zero for quadrature results.
  double std_error = 0.0;
  bool monte_carlo = false;
};

/// p_ε(x) = P(B(x, ε)) / (c_D ε^D).
///
/// One-dimensional families integrate the density over the ball with adaptive
/// quadrature (relative tolerance 1e-8). Higher dimensions average the
/// density over `draws` uniform points in the ball and report the standard
/// error. Throws DomainError for ε ≤ 0.
SmoothedDensity smoothed_density(const DistributionSpec& dist, std::span<const double> x,
                                 double eps, std::size_t draws = 100000,
                                 std::uint64_t seed = 0x5eed);

}  // namespace klentropy
