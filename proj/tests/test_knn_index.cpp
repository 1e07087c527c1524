#include "catch_amalgamated.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "klentropy/distributions.hpp"
#include "klentropy/error.hpp"
#include "klentropy/knn_index.hpp"
#include "oracles.hpp"

using namespace klentropy;

namespace {

Dataset line(std::vector<double> v) { return Dataset(MetricSpace::euclidean(1), std::move(v)); }

// Random dataset whose coordinates come from a coarse grid when `ties` is set,
// so equal distances and duplicate points are common.
Dataset random_dataset(std::mt19937_64& gen, SpaceKind kind, int dim, std::size_t n, bool ties) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> q(0, 7);
  std::vector<double> c(n * dim);
  for (auto& v : c) v = ties ? q(gen) / 8.0 : u(gen);
  return Dataset(kind == SpaceKind::euclidean ? MetricSpace::euclidean(dim)
                                              : MetricSpace::flat_torus(dim),
                 std::move(c));
}

void require_matches_oracle(const KnnIndex& index, std::span<const double> x, int k,
                            std::optional<std::size_t> exclude) {
  const auto got = index.query(x, k, exclude);
  const auto want = oracle::brute_force(index.data(), x, exclude);
  REQUIRE(got.size() == static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    REQUIRE(std::bit_cast<std::uint64_t>(got[j].distance) ==
            std::bit_cast<std::uint64_t>(want[j].first));
    REQUIRE(got[j].index == want[j].second);
  }
}

}  // namespace

TEST_CASE("knn_distance examples", "[knn]") {
  const KnnIndex idx(line({1.0, 3.0}));
  const std::vector<double> x{0.0};
  CHECK(knn_distance(idx, x, 1) == 1.0);
  CHECK(knn_distance(idx, x, 2) == 3.0);
  const KnnIndex torus(Dataset(MetricSpace::flat_torus(1), {0.1, 0.9}));
  CHECK(knn_distance(torus, x, 1) == Catch::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("leave-one-out examples", "[knn]") {
  const KnnIndex idx(line({0.0, 1.0, 3.0}));
  CHECK(loo_knn_distances(idx, 1).eps == std::vector<double>{1.0, 1.0, 2.0});
  CHECK(loo_knn_distances(idx, 2).eps == std::vector<double>{3.0, 2.0, 3.0});
  const auto r = loo_knn_distances(idx, 1);
  CHECK(r.neighbor_indices[0] == std::vector<std::size_t>{1});
  CHECK(r.neighbor_indices[1] == std::vector<std::size_t>{0});  // tie 1 vs 1 -> lower index
  CHECK_THROWS_AS(loo_knn_distances(idx, 3), RangeError);
  CHECK_THROWS_AS(loo_knn_distances(idx, 0), RangeError);
}

TEST_CASE("duplicates", "[knn]") {
  const KnnIndex idx(line({0.0, 2.0, 2.0, 5.0}));
  CHECK_THROWS_AS(loo_knn_distances(idx, 1, DuplicatePolicy::strict), ZeroDistanceError);
  try {
    loo_knn_distances(idx, 1, DuplicatePolicy::strict);
  } catch (const ZeroDistanceError& e) {
    CHECK(e.count() == 2);
  }
  const auto r = loo_knn_distances(idx, 1, DuplicatePolicy::lenient);
  CHECK(r.zero_distance_count == 2);
  CHECK(r.eps == std::vector<double>{2.0, 0.0, 0.0, 3.0});
  CHECK(loo_knn_distances(idx, 2, DuplicatePolicy::strict).eps ==
        std::vector<double>{2.0, 2.0, 2.0, 3.0});
}

TEST_CASE("construction and range errors", "[knn]") {
  CHECK_THROWS_AS(KnnIndex(line({})), RangeError);
  const KnnIndex one(line({4.0}));
  const std::vector<double> x{0.0};
  CHECK(knn_distance(one, x, 1) == 4.0);
  CHECK_THROWS_AS(knn_distance(one, x, 2), RangeError);
  CHECK_THROWS_AS(knn_distance(one, x, 1, 0), RangeError);
  const std::vector<double> bad{0.0, 1.0};
  CHECK_THROWS_AS(knn_distance(one, bad, 1), DimensionMismatch);
  CHECK_THROWS_AS(KnnIndex(Dataset(MetricSpace::flat_torus(4), std::vector<double>(8, 0.5)),
                           KnnBackend::kd_tree),
                  DomainError);
  CHECK(KnnIndex(Dataset(MetricSpace::flat_torus(4), std::vector<double>(8, 0.5))).backend() ==
        KnnBackend::brute_force);
  CHECK(KnnIndex(line({1.0, 2.0})).backend() == KnnBackend::kd_tree);
}

TEST_CASE("k-d tree equals brute-force oracle", "[knn]") {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<int> nd(1, 200), dd(1, 5);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (auto kind : {SpaceKind::euclidean, SpaceKind::flat_torus}) {
    for (int rep = 0; rep < 400; ++rep) {
      const int dim = kind == SpaceKind::flat_torus ? 1 + rep % 3 : dd(gen);
      const std::size_t n = static_cast<std::size_t>(nd(gen));
      const Dataset data = random_dataset(gen, kind, dim, n, rep % 3 == 0);
      const KnnIndex tree(data, KnnBackend::kd_tree);
      const KnnIndex brute(data, KnnBackend::brute_force);
      std::uniform_int_distribution<int> kd(1, static_cast<int>(n));
      std::vector<double> x(dim);
      for (auto& v : x) v = kind == SpaceKind::flat_torus ? wrap_unit(u(gen)) : u(gen);
      const int k = kd(gen);
      require_matches_oracle(tree, x, k, std::nullopt);
      require_matches_oracle(brute, x, k, std::nullopt);
      if (n >= 2) {
        const std::size_t ex = static_cast<std::size_t>(rep) % n;
        const int k2 = 1 + (k - 1) % static_cast<int>(n - 1);
        require_matches_oracle(tree, data.point(ex), k2, ex);
        require_matches_oracle(brute, data.point(ex), k2, ex);
      }
    }
  }
}

TEST_CASE("k-d tree on a large gaussian sample", "[knn]") {
  const Dataset data = sample(DistributionSpec::gaussian(5), 10000, 77);
  const KnnIndex tree(data, KnnBackend::kd_tree);
  for (std::size_t i = 0; i < 10000; i += 97) {
    require_matches_oracle(tree, data.point(i), 4, i);
  }
}

TEST_CASE("leave-one-out backends agree bitwise", "[knn]") {
  std::mt19937_64 gen(7);
  for (auto kind : {SpaceKind::euclidean, SpaceKind::flat_torus}) {
    for (int dim = 1; dim <= 3; ++dim) {
      const Dataset data = random_dataset(gen, kind, dim, 300, false);
      const auto a = loo_knn_distances(KnnIndex(data, KnnBackend::kd_tree), 3);
      const auto b = loo_knn_distances(KnnIndex(data, KnnBackend::brute_force), 3);
      REQUIRE(a.eps == b.eps);
      REQUIRE(a.neighbor_indices == b.neighbor_indices);
    }
  }
}

TEST_CASE("monotone in k and permutation covariant", "[knn]") {
  std::mt19937_64 gen(3);
  const Dataset data = random_dataset(gen, SpaceKind::euclidean, 2, 150, false);
  const KnnIndex idx(data);
  const std::vector<double> x{0.3, 0.6};
  for (int k = 1; k < 150; ++k) REQUIRE(knn_distance(idx, x, k) <= knn_distance(idx, x, k + 1));

  std::vector<std::size_t> perm(150);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<double> c;
  for (auto p : perm) c.insert(c.end(), data.point(p).begin(), data.point(p).end());
  const KnnIndex shuffled(Dataset(data.space(), c));
  const auto a = loo_knn_distances(idx, 2).eps;
  const auto b = loo_knn_distances(shuffled, 2).eps;
  for (std::size_t i = 0; i < perm.size(); ++i) REQUIRE(b[i] == a[perm[i]]);
}
