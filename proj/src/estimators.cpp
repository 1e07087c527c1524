#include "klentropy/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klentropy/error.hpp"
#include "klentropy/quadrature.hpp"
#include "klentropy/rng.hpp"
#include "klentropy/special_functions.hpp"

namespace klentropy {
namespace {

constexpr double kDegenerateFraction = 0.99;

bool same_set(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

EntropyEstimate kl_entropy_from_distances(std::span<const double> eps, const MetricSpace& space,
                                          int k, DuplicatePolicy policy) {
  const std::size_t n = eps.size();
  if (n < 2) throw RangeError("kl_entropy: need at least 2 samples");
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
    throw RangeError("kl_entropy: need 1 <= k <= n-1, got k=" + std::to_string(k));
  }
  double log_sum = 0.0;
  std::size_t kept = 0;
  for (double e : eps) {
    if (e > 0.0) {
      log_sum += std::log(e);
      ++kept;
    }
  }
  const std::size_t dropped = n - kept;
  if (dropped > 0 && policy == DuplicatePolicy::strict) {
    throw ZeroDistanceError("kl_entropy: " + std::to_string(dropped) +
                                " points have zero k-NN distance",
                            dropped);
  }
  if (kept == 0) throw ZeroDistanceError("kl_entropy: every k-NN distance is zero", dropped);

  EntropyEstimate est;
  est.n = n;
  est.k = k;
  est.dropped_points = dropped;
  est.value = digamma(static_cast<double>(n)) - digamma(static_cast<double>(k)) +
              std::log(space.ball_constant()) +
              space.dim() * log_sum / static_cast<double>(kept);
  return est;
}

EntropyEstimate kl_entropy(const KnnIndex& index, int k, DuplicatePolicy policy) {
  if (index.size() < 2) throw RangeError("kl_entropy: need at least 2 samples");
  const KnnResult knn = loo_knn_distances(index, k, DuplicatePolicy::lenient);
  return kl_entropy_from_distances(knn.eps, index.data().space(), k, policy);
}

EntropyEstimate kl_entropy(const Dataset& data, int k, DuplicatePolicy policy,
                           KnnBackend backend) {
  if (data.size() < 2) throw RangeError("kl_entropy: need at least 2 samples");
  return kl_entropy(KnnIndex(data, backend), k, policy);
}

MutualInformationEstimate mutual_information(const Dataset& x, const Dataset& y, int k,
                                             DuplicatePolicy policy) {
  const Dataset joint = join(x, y);
  const KnnIndex ix(x);
  const KnnIndex iy(y);
  const KnnIndex ij(joint);
  const KnnResult kx = loo_knn_distances(ix, k, DuplicatePolicy::lenient);
  const KnnResult ky = loo_knn_distances(iy, k, DuplicatePolicy::lenient);
  const KnnResult kj = loo_knn_distances(ij, k, DuplicatePolicy::lenient);

  MutualInformationEstimate mi;
  mi.h_x = kl_entropy_from_distances(kx.eps, x.space(), k, policy);
  mi.h_y = kl_entropy_from_distances(ky.eps, y.space(), k, policy);
  mi.h_joint = kl_entropy_from_distances(kj.eps, joint.space(), k, policy);
  mi.value = mi.h_x.value + mi.h_y.value - mi.h_joint.value;

  std::size_t identical = 0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (same_set(kj.neighbor_indices[i], kx.neighbor_indices[i]) &&
        same_set(kj.neighbor_indices[i], ky.neighbor_indices[i])) {
      ++identical;
    }
  }
  mi.identical_neighbor_fraction = static_cast<double>(identical) / static_cast<double>(joint.size());
  mi.degenerate = mi.identical_neighbor_fraction >= kDegenerateFraction;
  return mi;
}

SmoothedDensity smoothed_density(const DistributionSpec& dist, std::span<const double> x,
                                 double eps, std::size_t draws, std::uint64_t seed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("smoothed_density: eps must be positive and finite");
  }
  const MetricSpace space = dist.space();
  if (x.size() != static_cast<std::size_t>(dist.dim)) {
    throw DimensionMismatch("smoothed_density: point dimension does not match distribution");
  }
  const bool torus = space.kind() == SpaceKind::flat_torus;
  const double volume = space.ball_constant() * std::pow(eps, dist.dim);

  if (dist.dim == 1) {
    double mass = 0.0;
    if (torus) {
      // A ball of radius ≥ 1/2 is the whole circle.
      const double half = std::min(eps, 0.5);
      mass = integrate([&](double y) {
               const double p = wrap_unit(y);
               return density(dist, std::span<const double>(&p, 1));
             },
                       x[0] - half, x[0] + half)
                 .value;
    } else {
      double lo = x[0] - eps;
      double hi = x[0] + eps;
      if (dist.family != Family::gaussian) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
      }
      if (lo < hi) {
        mass = integrate([&](double y) { return density(dist, std::span<const double>(&y, 1)); },
                         lo, hi)
                   .value;
      }
    }
    return {mass / volume, 0.0, false};
  }

  if (draws < 2) throw RangeError("smoothed_density: need at least 2 Monte Carlo draws");
  Rng rng(seed);
  const auto dim = static_cast<std::size_t>(dist.dim);
  std::vector<double> y(dim);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t m = 0; m < draws; ++m) {
    double len_sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      y[d] = rng.normal();
      len_sq += y[d] * y[d];
    }
    const double radius = eps * std::pow(rng.uniform(), 1.0 / dist.dim) / std::sqrt(len_sq);
    for (std::size_t d = 0; d < dim; ++d) {
      y[d] = x[d] + radius * y[d];
      if (torus) y[d] = wrap_unit(y[d]);
    }
    const double p = density(dist, y);
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / static_cast<double>(draws);
  const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(draws - 1));
  // On the torus a ball wider than 1/2 overlaps itself; the average of p over
  // a uniform point of the Euclidean ball is still P(B)/vol only for ε ≤ 1/2.
  return {mean, std::sqrt(var / static_cast<double>(draws)), true};
}

}  // namespace klentropy
