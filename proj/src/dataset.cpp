#include "klentropy/dataset.hpp"

#include <cmath>
#include <string>

#include "klentropy/error.hpp"

namespace klentropy {

Dataset::Dataset(MetricSpace space, std::vector<double> coords)
    : space_(space), coords_(std::move(coords)), size_(0) {
  const auto dim = static_cast<std::size_t>(space_.dim());
  if (coords_.size() % dim != 0) {
    throw DimensionMismatch("dataset: " + std::to_string(coords_.size()) +
                            " coordinates is not a multiple of D=" + std::to_string(dim));
  }
  size_ = coords_.size() / dim;
  for (double& c : coords_) {
    if (!std::isfinite(c)) throw DomainError("dataset: non-finite coordinate");
    if (space_.kind() == SpaceKind::flat_torus) c = wrap_unit(c);
  }
}

Dataset Dataset::from_points(MetricSpace space, const std::vector<Point>& points) {
  std::vector<double> coords;
  coords.reserve(points.size() * static_cast<std::size_t>(space.dim()));
  for (const auto& p : points) {
    if (p.size() != static_cast<std::size_t>(space.dim())) {
      throw DimensionMismatch("dataset: point has " + std::to_string(p.size()) +
                              " coordinates, space has D=" + std::to_string(space.dim()));
    }
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return Dataset(space, std::move(coords));
}

Dataset join(const Dataset& x, const Dataset& y) {
  if (x.size() != y.size()) {
    throw DimensionMismatch("join: datasets have " + std::to_string(x.size()) + " and " +
                            std::to_string(y.size()) + " points");
  }
  if (x.space().kind() != y.space().kind()) {
    throw DimensionMismatch("join: cannot combine euclidean and torus coordinates");
  }
  const int dim = x.dim() + y.dim();
  const MetricSpace space = x.space().kind() == SpaceKind::euclidean ? MetricSpace::euclidean(dim)
                                                                     : MetricSpace::flat_torus(dim);
  std::vector<double> coords;
  coords.reserve(x.size() * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto a = x.point(i);
    const auto b = y.point(i);
    coords.insert(coords.end(), a.begin(), a.end());
    coords.insert(coords.end(), b.begin(), b.end());
  }
  return Dataset(space, std::move(coords));
}

}  // namespace klentropy
