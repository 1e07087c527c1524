#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "klentropy/distributions.hpp"
#include "klentropy/error.hpp"
#include "klentropy/estimators.hpp"
#include "klentropy/rng.hpp"
#include "klentropy/special_functions.hpp"

using namespace klentropy;
using Catch::Approx;

namespace {

Dataset line(std::vector<double> v) { return Dataset(MetricSpace::euclidean(1), std::move(v)); }

Dataset transformed(const Dataset& d, double scale, double shift) {
  std::vector<double> c(d.coords().begin(), d.coords().end());
  for (auto& v : c) v = v * scale + shift;
  return Dataset(d.space(), std::move(c));
}

}  // namespace

TEST_CASE("hand-evaluated estimate", "[estimators]") {
  const auto h = kl_entropy(line({0.0, 1.0, 3.0}), 1);
  CHECK(h.value == Approx(2.424196240746594).epsilon(1e-14));
  CHECK(h.n == 3);
  CHECK(h.k == 1);
  CHECK(h.dropped_points == 0);
  const auto h10 = kl_entropy(line({0.0, 10.0, 30.0}), 1);
  CHECK(h10.value == Approx(2.424196240746594 + std::log(10.0)).epsilon(1e-14));
  // k = 2: eps = (3, 2, 3).
  const double want2 = digamma(3) - digamma(2) + std::log(2.0) +
                       (std::log(3.0) + std::log(2.0) + std::log(3.0)) / 3.0;
  CHECK(kl_entropy(line({0.0, 1.0, 3.0}), 2).value == Approx(want2).epsilon(1e-14));
}

TEST_CASE("estimator errors", "[estimators]") {
  CHECK_THROWS_AS(kl_entropy(line({1.0}), 1), RangeError);
  CHECK_THROWS_AS(kl_entropy(line({1.0, 2.0}), 2), RangeError);
  CHECK_THROWS_AS(kl_entropy(line({1.0, 2.0, 3.0}), 0), RangeError);
  CHECK_THROWS_AS(kl_entropy(line({1.0, 1.0, 3.0}), 1), ZeroDistanceError);
  CHECK_THROWS_AS(kl_entropy(line({1.0, 1.0}), 1, DuplicatePolicy::lenient), ZeroDistanceError);
}

TEST_CASE("lenient mode drops zero distances and renormalizes", "[estimators]") {
  const auto h = kl_entropy(line({0.0, 2.0, 2.0, 5.0}), 1, DuplicatePolicy::lenient);
  CHECK(h.dropped_points == 2);
  // Kept eps: 2 (point 0) and 3 (point 3), averaged over m = 2.
  const double want = digamma(4) - digamma(1) + std::log(2.0) + (std::log(2.0) + std::log(3.0)) / 2;
  CHECK(h.value == Approx(want).epsilon(1e-14));
}

TEST_CASE("translation invariance is exact", "[estimators]") {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> q(-4096, 4096);
  for (int rep = 0; rep < 50; ++rep) {
    const int dim = 1 + rep % 4;
    std::vector<double> c(100 * dim);
    for (auto& v : c) v = q(gen) / 1024.0;
    const Dataset d(MetricSpace::euclidean(dim), c);
    const double t = q(gen) / 256.0;
    const auto a = kl_entropy(d, 1 + rep % 3, DuplicatePolicy::lenient);
    const auto b = kl_entropy(transformed(d, 1.0, t), 1 + rep % 3, DuplicatePolicy::lenient);
    REQUIRE(a.value == b.value);
  }
}

TEST_CASE("scale equivariance", "[estimators]") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> ua(0.1, 10.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int dim = 1 + rep % 5;
    const Dataset d = sample(DistributionSpec::gaussian(dim), 200, 100 + rep);
    const double a = ua(gen);
    const double h = kl_entropy(d, 1 + rep % 4).value;
    const double ha = kl_entropy(transformed(d, a, 0.0), 1 + rep % 4).value;
    REQUIRE(std::abs(ha - h - dim * std::log(a)) <= 1e-9);
  }
}

TEST_CASE("permutation invariance", "[estimators]") {
  const Dataset d = sample(DistributionSpec::gaussian(2), 500, 3);
  std::vector<std::size_t> perm(500);
  for (std::size_t i = 0; i < 500; ++i) perm[i] = i;
  std::mt19937_64 gen(4);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<double> c;
  for (auto p : perm) c.insert(c.end(), d.point(p).begin(), d.point(p).end());
  CHECK(kl_entropy(Dataset(d.space(), c), 3).value ==
        Approx(kl_entropy(d, 3).value).epsilon(1e-13));
}

TEST_CASE("backends give identical estimates", "[estimators]") {
  const Dataset d = sample(DistributionSpec::uniform_torus(2), 800, 5);
  CHECK(kl_entropy(d, 2, DuplicatePolicy::strict, KnnBackend::kd_tree).value ==
        kl_entropy(d, 2, DuplicatePolicy::strict, KnnBackend::brute_force).value);
  const KnnIndex idx(d);
  const auto eps = loo_knn_distances(idx, 2).eps;
  CHECK(kl_entropy_from_distances(eps, d.space(), 2, DuplicatePolicy::strict).value ==
        kl_entropy(idx, 2).value);
}

TEST_CASE("torus estimate is unbiased", "[estimators]") {
  const int trials = 100;
  std::vector<double> h(trials);
  for (int t = 0; t < trials; ++t) {
    h[t] = kl_entropy(sample(DistributionSpec::uniform_torus(1), 10000, substream_seed(77, t)), 1)
               .value;
  }
  double m = 0.0, s2 = 0.0;
  for (double v : h) m += v;
  m /= trials;
  for (double v : h) s2 += (v - m) * (v - m);
  const double se = std::sqrt(s2 / (trials - 1) / trials);
  CHECK(std::abs(m) <= 3 * se);
}

TEST_CASE("mutual information", "[estimators]") {
  const Dataset x = sample(DistributionSpec::gaussian(1), 2000, 1);
  const Dataset y = sample(DistributionSpec::gaussian(2), 2000, 2);
  const auto xy = mutual_information(x, y, 3);
  const auto yx = mutual_information(y, x, 3);
  CHECK(std::abs(xy.value - yx.value) <= 1e-12);
  CHECK(xy.value == Approx(xy.h_x.value + xy.h_y.value - xy.h_joint.value).epsilon(1e-15));
  CHECK_FALSE(xy.degenerate);
  CHECK(xy.identical_neighbor_fraction < 0.5);

  CHECK_THROWS_AS(mutual_information(x, sample(DistributionSpec::gaussian(1), 10, 1), 1),
                  DimensionMismatch);

  // Y = X + c: the joint law has no density; the estimate is still reported.
  const Dataset shifted = transformed(x, 1.0, 3.0);
  const auto deg = mutual_information(x, shifted, 1);
  CHECK(deg.degenerate);
  CHECK(std::isfinite(deg.value));
  CHECK(deg.value > 1.0);
}

TEST_CASE("smoothed density", "[estimators]") {
  const std::vector<double> x1{0.3};
  for (double eps : {0.01, 0.2, 0.5}) {
    const auto s = smoothed_density(DistributionSpec::uniform_torus(1), x1, eps);
    CHECK(s.value == Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(s.monte_carlo);
  }
  const std::vector<double> zero{0.0};
  const double p0 = 1.0 / std::sqrt(2 * std::numbers::pi);
  for (double eps : {0.01, 0.1, 1.0}) {
    CHECK(smoothed_density(DistributionSpec::gaussian(1), zero, eps).value < p0);
  }
  const std::vector<double> half{0.5};
  CHECK(smoothed_density(DistributionSpec::sine_bump(1), half, 0.1).value ==
        Approx(1.5450849718747366).epsilon(1e-8));
  // Cube: half the ball falls outside the support at the corner.
  CHECK(smoothed_density(DistributionSpec::uniform_cube(1), zero, 0.1).value ==
        Approx(0.5).epsilon(1e-10));

  const std::vector<double> x2{0.2, 0.9};
  const auto t2 = smoothed_density(DistributionSpec::uniform_torus(2), x2, 0.3, 20000);
  CHECK(t2.monte_carlo);
  CHECK(t2.value == Approx(1.0).epsilon(1e-12));
  const std::vector<double> g2{0.0, 0.0};
  const auto gs = smoothed_density(DistributionSpec::gaussian(2), g2, 0.5, 200000);
  // Exact: (1 - e^{-r²/2}) / (π r² / (2π)) · (1/2π) ... = (1 - e^{-r²/2}) / (π r²)
  const double exact = (1.0 - std::exp(-0.125)) / (std::numbers::pi * 0.25);
  CHECK(std::abs(gs.value - exact) <= 4 * gs.std_error + 1e-12);
  CHECK_THROWS_AS(smoothed_density(DistributionSpec::gaussian(1), zero, 0.0), DomainError);
}
