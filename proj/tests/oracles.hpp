#pragma once

// Independent reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "klentropy/dataset.hpp"

namespace oracle {

inline double distance(klentropy::SpaceKind kind, std::span<const double> a,
                       std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double diff = std::abs(a[d] - b[d]);
    if (kind == klentropy::SpaceKind::flat_torus) diff = std::min(diff, 1.0 - diff);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

/// All (distance, index) pairs sorted, optionally without one index.
inline std::vector<std::pair<double, std::size_t>> brute_force(
    const klentropy::Dataset& data, std::span<const double> x,
    std::optional<std::size_t> exclude = std::nullopt) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (exclude && *exclude == i) continue;
    all.emplace_back(distance(data.space().kind(), x, data.point(i)), i);
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace oracle
