#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "klentropy/metric_space.hpp"

namespace klentropy {

using Point = std::vector<double>;

/// n points of dimension D bound to a metric space, stored row-major.
/// Torus coordinates are wrapped into [0, 1) on construction.
class Dataset {
public:
  /// Throws DimensionMismatch when coords.size() is not a multiple of D,
  /// DomainError on non-finite coordinates.
  Dataset(MetricSpace space, std::vector<double> coords);

  static Dataset from_points(MetricSpace space, const std::vector<Point>& points);

  const MetricSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return size_; }
  int dim() const noexcept { return space_.dim(); }
  bool empty() const noexcept { return size_ == 0; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  bool operator==(const Dataset&) const = default;

private:
  MetricSpace space_;
  std::vector<double> coords_;
  std::size_t size_;
};

/// Concatenate the coordinates of two equally sized datasets point by point.
/// Both inputs must live on the same kind of space; the result is the product
/// space of that kind. Throws DimensionMismatch on length mismatch.
Dataset join(const Dataset& x, const Dataset& y);

}  // namespace klentropy
