#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace klentropy {

enum class SpaceKind { euclidean, flat_torus };

std::string_view to_string(SpaceKind kind);
SpaceKind parse_space_kind(std::string_view name);

/// A metric measure space of dimension D: every ball of radius r ≤ rho has
/// base measure exactly c_D r^D.
///
/// The flat torus is [0,1)^D with per-coordinate wraparound distance
/// min(|Δ|, 1 - |Δ|) combined in the Euclidean norm. Its balls are Euclidean
/// balls up to radius 1/2, so c_D is the Euclidean unit-ball volume and
/// rho = 1/2 (for D = 1 this is the circle of length 1 with c_1 = 2).
class MetricSpace {
public:
  static MetricSpace euclidean(int dim);
  static MetricSpace flat_torus(int dim);

  SpaceKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double ball_constant() const noexcept { return ball_constant_; }
  double rho() const noexcept { return rho_; }

  bool operator==(const MetricSpace&) const = default;

private:
  MetricSpace(SpaceKind kind, int dim, double ball_constant, double rho)
      : kind_(kind), dim_(dim), ball_constant_(ball_constant), rho_(rho) {}

  SpaceKind kind_;
  int dim_;
  double ball_constant_;
  double rho_;
};

/// Distance between two points of the space. Throws DimensionMismatch.
double distance(const MetricSpace& space, std::span<const double> a, std::span<const double> b);

struct BallVolume {
  double value;
  /// False when r > rho and the c_D r^D formula is no longer the exact measure.
  bool exact;
};

BallVolume ball_volume(const MetricSpace& space, double r);

/// Map a coordinate into the canonical torus representative in [0, 1).
double wrap_unit(double x) noexcept;

}  // namespace klentropy
