#include "klentropy/metric_space.hpp"

#include <algorithm>
#include <cmath>

#include "klentropy/error.hpp"
#include "klentropy/special_functions.hpp"

namespace klentropy {

std::string_view to_string(SpaceKind kind) {
  return kind == SpaceKind::euclidean ? "euclidean" : "flat_torus";
}

SpaceKind parse_space_kind(std::string_view name) {
  if (name == "euclidean") return SpaceKind::euclidean;
  if (name == "flat_torus" || name == "torus") return SpaceKind::flat_torus;
  throw UsageError("unknown space kind '" + std::string(name) + "'");
}

MetricSpace MetricSpace::euclidean(int dim) {
  if (dim < 1) throw DomainError("metric space dimension must be >= 1");
  return MetricSpace(SpaceKind::euclidean, dim, unit_ball_volume(dim),
                     std::numeric_limits<double>::infinity());
}

MetricSpace MetricSpace::flat_torus(int dim) {
  if (dim < 1) throw DomainError("metric space dimension must be >= 1");
  return MetricSpace(SpaceKind::flat_torus, dim, unit_ball_volume(dim), 0.5);
}

double wrap_unit(double x) noexcept {
  double w = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return w >= 1.0 ? 0.0 : w;
}

double distance(const MetricSpace& space, std::span<const double> a, std::span<const double> b) {
  const auto dim = static_cast<std::size_t>(space.dim());
  if (a.size() != dim || b.size() != dim) {
    throw DimensionMismatch("distance: points must have " + std::to_string(dim) + " coordinates");
  }
  double acc = 0.0;
  if (space.kind() == SpaceKind::euclidean) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = a[d] - b[d];
      acc += diff * diff;
    }
  } else {
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = std::abs(a[d] - b[d]);
      const double m = std::min(diff, 1.0 - diff);
      acc += m * m;
    }
  }
  return std::sqrt(acc);
}

BallVolume ball_volume(const MetricSpace& space, double r) {
  if (!(r >= 0.0)) throw DomainError("ball_volume: radius must be nonnegative");
  return {space.ball_constant() * std::pow(r, space.dim()), r <= space.rho()};
}

}  // namespace klentropy
