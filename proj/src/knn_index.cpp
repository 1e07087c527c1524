#include "klentropy/knn_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "klentropy/error.hpp"
#include "klentropy/kernels.hpp"

namespace klentropy {
namespace {

constexpr std::uint32_t kLeafSize = 16;
constexpr std::size_t kScanChunk = 256;
constexpr int kMaxTorusTreeDim = 3;
// Box bounds and leaf distances are rounded differently; never prune a box
// whose bound is within this relative margin of the current k-th distance.
constexpr double kPruneSlack = 1e-9;

void consider(std::vector<Neighbor>& best, Neighbor candidate, int k, bool dedupe) {
  const auto cap = static_cast<std::size_t>(k);
  if (best.size() == cap && !(candidate < best.back())) return;
  if (dedupe) {
    for (const auto& b : best) {
      if (b.index == candidate.index) return;
    }
  }
  best.insert(std::upper_bound(best.begin(), best.end(), candidate), candidate);
  if (best.size() > cap) best.pop_back();
}

}  // namespace

KnnIndex::KnnIndex(Dataset data, KnnBackend backend) : data_(std::move(data)), backend_(backend) {
  if (data_.empty()) throw RangeError("knn index: dataset must contain at least one point");
  if (data_.size() > std::numeric_limits<std::uint32_t>::max() / 8) {
    throw RangeError("knn index: dataset too large");
  }
  const bool torus = data_.space().kind() == SpaceKind::flat_torus;
  const int dim = data_.dim();
  if (backend_ == KnnBackend::automatic) {
    backend_ = (torus && dim > kMaxTorusTreeDim) ? KnnBackend::brute_force : KnnBackend::kd_tree;
  }
  if (backend_ == KnnBackend::kd_tree && torus && dim > kMaxTorusTreeDim) {
    throw DomainError("knn index: k-d tree over torus images supports D <= 3");
  }

  const auto n = data_.size();
  const auto udim = static_cast<std::size_t>(dim);
  if (backend_ == KnnBackend::brute_force) {
    entries_ = n;
    soa_.resize(n * udim);
    original_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      original_[i] = i;
      const auto p = data_.point(i);
      for (std::size_t d = 0; d < udim; ++d) soa_[d * n + i] = p[d];
    }
    return;
  }

  // Entry list: every point, plus its periodic images inside [-1/2, 3/2]^D.
  std::vector<double> image_coords;
  if (!torus) {
    image_coords.assign(data_.coords().begin(), data_.coords().end());
    original_.resize(n);
    std::iota(original_.begin(), original_.end(), std::size_t{0});
  } else {
    std::size_t shifts = 1;
    for (int d = 0; d < dim; ++d) shifts *= 3;
    std::vector<double> image(udim);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = data_.point(i);
      for (std::size_t s = 0; s < shifts; ++s) {
        std::size_t code = s;
        bool inside = true;
        for (std::size_t d = 0; d < udim; ++d) {
          const double shift = static_cast<double>(code % 3) - 1.0;
          code /= 3;
          image[d] = p[d] + shift;
          if (image[d] < -0.5 || image[d] > 1.5) inside = false;
        }
        if (!inside) continue;
        image_coords.insert(image_coords.end(), image.begin(), image.end());
        original_.push_back(i);
      }
    }
  }
  entries_ = original_.size();
  build_tree(image_coords);
}

void KnnIndex::build_tree(const std::vector<double>& image_coords) {
  const auto udim = static_cast<std::size_t>(data_.dim());
  std::vector<std::uint32_t> order(entries_);
  std::iota(order.begin(), order.end(), 0U);
  nodes_.reserve(2 * entries_ / kLeafSize + 2);
  build_node(order, image_coords, 0, static_cast<std::uint32_t>(entries_));

  // Lay the original coordinates out in leaf order.
  std::vector<std::size_t> original(entries_);
  soa_.assign(entries_ * udim, 0.0);
  for (std::size_t pos = 0; pos < entries_; ++pos) {
    const std::size_t entry = order[pos];
    original[pos] = original_[entry];
    const auto p = data_.point(original_[entry]);
    for (std::size_t d = 0; d < udim; ++d) soa_[d * entries_ + pos] = p[d];
  }
  original_ = std::move(original);
}

std::int32_t KnnIndex::build_node(std::vector<std::uint32_t>& order,
                                  const std::vector<double>& image_coords, std::uint32_t begin,
                                  std::uint32_t end) {
  const auto udim = static_cast<std::size_t>(data_.dim());
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  box_lo_.resize(box_lo_.size() + udim, std::numeric_limits<double>::infinity());
  box_hi_.resize(box_hi_.size() + udim, -std::numeric_limits<double>::infinity());
  double* lo = box_lo_.data() + static_cast<std::size_t>(id) * udim;
  double* hi = box_hi_.data() + static_cast<std::size_t>(id) * udim;
  for (std::uint32_t pos = begin; pos < end; ++pos) {
    const double* c = image_coords.data() + static_cast<std::size_t>(order[pos]) * udim;
    for (std::size_t d = 0; d < udim; ++d) {
      lo[d] = std::min(lo[d], c[d]);
      hi[d] = std::max(hi[d], c[d]);
    }
  }
  if (end - begin <= kLeafSize) return id;

  std::size_t split_dim = 0;
  double spread = -1.0;
  for (std::size_t d = 0; d < udim; ++d) {
    if (hi[d] - lo[d] > spread) {
      spread = hi[d] - lo[d];
      split_dim = d;
    }
  }
  // All entries coincide: keep one large leaf.
  if (spread <= 0.0) return id;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = image_coords[static_cast<std::size_t>(a) * udim + split_dim];
                     const double vb = image_coords[static_cast<std::size_t>(b) * udim + split_dim];
                     return va < vb || (va == vb && a < b);
                   });
  const std::int32_t left = build_node(order, image_coords, begin, mid);
  const std::int32_t right = build_node(order, image_coords, mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double KnnIndex::box_lower_bound_sq(std::int32_t node, const double* q) const {
  const auto udim = static_cast<std::size_t>(data_.dim());
  const double* lo = box_lo_.data() + static_cast<std::size_t>(node) * udim;
  const double* hi = box_hi_.data() + static_cast<std::size_t>(node) * udim;
  double acc = 0.0;
  for (std::size_t d = 0; d < udim; ++d) {
    double gap = 0.0;
    if (q[d] < lo[d]) {
      gap = lo[d] - q[d];
    } else if (q[d] > hi[d]) {
      gap = q[d] - hi[d];
    }
    acc += gap * gap;
  }
  return acc;
}

void KnnIndex::scan(std::size_t begin, std::size_t end, const double* q, int k,
                    std::optional<std::size_t> exclude, std::vector<Neighbor>& best) const {
  const bool dedupe = data_.space().kind() == SpaceKind::flat_torus && backend_ == KnnBackend::kd_tree;
  std::array<double, kScanChunk> dist{};
  for (std::size_t chunk = begin; chunk < end; chunk += kScanChunk) {
    const std::size_t stop = std::min(end, chunk + kScanChunk);
    kernels::distances(data_.space().kind(), soa_.data(), entries_, data_.dim(), chunk, stop, q,
                       dist.data());
    for (std::size_t pos = chunk; pos < stop; ++pos) {
      const std::size_t idx = original_[pos];
      if (exclude && *exclude == idx) continue;
      consider(best, Neighbor{dist[pos - chunk], idx}, k, dedupe);
    }
  }
}

void KnnIndex::search(std::int32_t node, const double* q, int k,
                      std::optional<std::size_t> exclude, std::vector<Neighbor>& best) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  if (nd.left < 0) {
    scan(nd.begin, nd.end, q, k, exclude, best);
    return;
  }
  const double bound_left = box_lower_bound_sq(nd.left, q);
  const double bound_right = box_lower_bound_sq(nd.right, q);
  const bool left_first = bound_left <= bound_right;
  const std::int32_t children[2] = {left_first ? nd.left : nd.right, left_first ? nd.right : nd.left};
  const double bounds[2] = {left_first ? bound_left : bound_right,
                            left_first ? bound_right : bound_left};
  for (int c = 0; c < 2; ++c) {
    if (best.size() == static_cast<std::size_t>(k)) {
      const double worst = best.back().distance;
      if (bounds[c] > worst * worst * (1.0 + kPruneSlack)) continue;
    }
    search(children[c], q, k, exclude, best);
  }
}

std::vector<Neighbor> KnnIndex::query(std::span<const double> x, int k,
                                      std::optional<std::size_t> exclude) const {
  const auto n = data_.size();
  if (x.size() != static_cast<std::size_t>(data_.dim())) {
    throw DimensionMismatch("knn query: expected " + std::to_string(data_.dim()) +
                            " coordinates, got " + std::to_string(x.size()));
  }
  const std::size_t available = (exclude && *exclude < n) ? n - 1 : n;
  if (k < 1 || static_cast<std::size_t>(k) > available) {
    throw RangeError("knn query: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(available) + "]");
  }
  Point q(x.begin(), x.end());
  if (data_.space().kind() == SpaceKind::flat_torus) {
    for (double& c : q) c = wrap_unit(c);
  }
  std::vector<Neighbor> best;
  best.reserve(static_cast<std::size_t>(k) + 1);
  if (backend_ == KnnBackend::brute_force) {
    scan(0, entries_, q.data(), k, exclude, best);
  } else {
    search(0, q.data(), k, exclude, best);
  }
  return best;
}

double knn_distance(const KnnIndex& index, std::span<const double> x, int k,
                    std::optional<std::size_t> exclude) {
  return index.query(x, k, exclude).back().distance;
}

KnnResult loo_knn_distances(const KnnIndex& index, int k, DuplicatePolicy policy) {
  const auto n = index.size();
  if (k < 1 || static_cast<std::size_t>(k) >= n) {
    throw RangeError("leave-one-out k-NN: need 1 <= k <= n-1, got k=" + std::to_string(k) +
                     ", n=" + std::to_string(n));
  }
  KnnResult result;
  result.k = k;
  result.eps.resize(n);
  result.neighbor_indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = index.query(index.data().point(i), k, i);
    result.eps[i] = nb.back().distance;
    auto& ids = result.neighbor_indices[i];
    ids.reserve(nb.size());
    for (const auto& e : nb) ids.push_back(e.index);
    if (result.eps[i] == 0.0) ++result.zero_distance_count;
  }
  if (policy == DuplicatePolicy::strict && result.zero_distance_count > 0) {
    throw ZeroDistanceError("leave-one-out k-NN: " + std::to_string(result.zero_distance_count) +
                                " points have a zero k-NN distance (duplicated points)",
                            result.zero_distance_count);
  }
  return result;
}

}  // namespace klentropy
