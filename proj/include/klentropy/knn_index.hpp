#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "klentropy/dataset.hpp"

namespace klentropy {

enum class KnnBackend { automatic, kd_tree, brute_force };

/// How zero leave-one-out distances (duplicated points) are treated.
enum class DuplicatePolicy { strict, lenient };

struct Neighbor {
  double distance;
  std::size_t index;

  auto operator<=>(const Neighbor&) const = default;
};

/// k-th nearest neighbor distances ε_k, one per query, and the k neighbor
/// indices of each query in (distance, index) order.
struct KnnResult {
  int k = 0;
  std::vector<double> eps;
  std::vector<std::vector<std::size_t>> neighbor_indices;
  /// Queries whose ε_k is exactly zero (only nonzero under DuplicatePolicy::lenient).
  std::size_t zero_distance_count = 0;
};

/// Exact k-NN index over an immutable dataset.
///
/// Euclidean data gets a k-d tree with tight bounding boxes. Flat-torus data
/// with D ≤ 3 gets a k-d tree over the periodic images of every point that
/// fall in [-1/2, 3/2]^D; leaves keep the original coordinates so distances
/// are always computed with the torus metric. Higher-dimensional torus data
/// uses brute force. Ties are broken by ascending point index on every
/// backend, so all backends return bitwise identical results.
///
/// Queries are const and may run concurrently.
class KnnIndex {
public:
  /// Throws RangeError for an empty dataset, DomainError when kd_tree is
  /// requested for a torus with D > 3.
  explicit KnnIndex(Dataset data, KnnBackend backend = KnnBackend::automatic);

  const Dataset& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  /// The backend actually in use (never automatic).
  KnnBackend backend() const noexcept { return backend_; }

  /// The k nearest points to x, sorted by (distance, index), optionally
  /// skipping one dataset index. Throws RangeError unless 1 ≤ k ≤ n
  /// (k ≤ n - 1 with exclude), DimensionMismatch on a malformed query.
  std::vector<Neighbor> query(std::span<const double> x, int k,
                              std::optional<std::size_t> exclude = std::nullopt) const;

private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  void build_tree(const std::vector<double>& image_coords);
  std::int32_t build_node(std::vector<std::uint32_t>& order, const std::vector<double>& image_coords,
                          std::uint32_t begin, std::uint32_t end);
  double box_lower_bound_sq(std::int32_t node, const double* q) const;
  void scan(std::size_t begin, std::size_t end, const double* q, int k,
            std::optional<std::size_t> exclude, std::vector<Neighbor>& best) const;
  void search(std::int32_t node, const double* q, int k, std::optional<std::size_t> exclude,
              std::vector<Neighbor>& best) const;

  Dataset data_;
  KnnBackend backend_;
  std::size_t entries_ = 0;            // number of (possibly image) entries
  std::vector<double> soa_;            // original coordinates, entry order, SoA
  std::vector<std::size_t> original_;  // entry -> dataset index
  std::vector<Node> nodes_;
  std::vector<double> box_lo_;  // node * D + d
  std::vector<double> box_hi_;
};

/// ε_k(x) for a single query. See KnnIndex::query for errors.
double knn_distance(const KnnIndex& index, std::span<const double> x, int k,
                    std::optional<std::size_t> exclude = std::nullopt);

/// Leave-one-out k-NN distances of every dataset point.
///
/// Throws RangeError unless 1 ≤ k ≤ n - 1; under DuplicatePolicy::strict throws
/// ZeroDistanceError if any ε_k is zero.
KnnResult loo_knn_distances(const KnnIndex& index, int k,
                            DuplicatePolicy policy = DuplicatePolicy::strict);

}  // namespace klentropy
