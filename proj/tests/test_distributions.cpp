#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "klentropy/distributions.hpp"
#include "klentropy/error.hpp"
#include "klentropy/quadrature.hpp"
#include "klentropy/rng.hpp"
#include "klentropy/special_functions.hpp"
#include "oracles.hpp"

using namespace klentropy;
using Catch::Approx;

TEST_CASE("rng substreams are fixed functions of (seed, index)", "[rng]") {
  static_assert(substream_seed(1, 0) != substream_seed(1, 1));
  static_assert(substream_seed(1, 0) != substream_seed(2, 0));
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
  Rng r(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = r.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("normal variates have unit variance", "[rng]") {
  Rng r(10);
  double s = 0.0, ss = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    ss += z * z;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(ss / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("sampling is deterministic and respects the support", "[distributions]") {
  const auto torus = DistributionSpec::uniform_torus(1);
  const Dataset a = sample(torus, 5, 7);
  const Dataset b = sample(torus, 5, 7);
  CHECK(a == b);
  CHECK(a.size() == 5);
  for (double v : a.coords()) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK_FALSE(sample(torus, 5, 8) == a);

  const Dataset s = sample(DistributionSpec::sine_bump(2), 20000, 3);
  for (double v : s.coords()) {
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  const Dataset c = sample(DistributionSpec::uniform_cube(3), 1000, 3);
  CHECK(c.space().kind() == SpaceKind::euclidean);
  for (double v : c.coords()) {
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("gaussian sample mean", "[distributions]") {
  const Dataset g = sample(DistributionSpec::gaussian(1), 1000000, 1);
  double s = 0.0;
  for (double v : g.coords()) s += v;
  CHECK(std::abs(s / 1e6) <= 4.0 / 1000.0);
  const Dataset g3 = sample(DistributionSpec::gaussian(1, 3.0), 200000, 2);
  double ss = 0.0;
  for (double v : g3.coords()) ss += v * v;
  CHECK(ss / 200000 == Approx(9.0).epsilon(0.02));
}

TEST_CASE("sine bump marginal matches its CDF", "[distributions]") {
  // F(x) = (1 - cos(πx)) / 2; compare with a Kolmogorov-Smirnov style check.
  const std::size_t n = 50000;
  const Dataset s = sample(DistributionSpec::sine_bump(1), n, 4);
  std::vector<double> v(s.coords().begin(), s.coords().end());
  std::sort(v.begin(), v.end());
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = 0.5 * (1.0 - std::cos(std::numbers::pi * v[i]));
    dmax = std::max({dmax, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
  }
  CHECK(dmax < 1.95 / std::sqrt(double(n)));  // 99.9% KS critical value
}

TEST_CASE("true entropy", "[distributions]") {
  CHECK(true_entropy(DistributionSpec::uniform_cube(3)) == 0.0);
  CHECK(true_entropy(DistributionSpec::uniform_torus(2)) == 0.0);
  CHECK(true_entropy(DistributionSpec::gaussian(1)) == Approx(1.4189385332046727).epsilon(1e-14));
  CHECK(true_entropy(DistributionSpec::gaussian(3, 2.0)) ==
        Approx(1.5 * std::log(2 * std::numbers::pi * std::numbers::e * 4.0)).epsilon(1e-14));
  // Quadrature oracle for the sine bump: -∫ p ln p.
  const double pi = std::numbers::pi;
  const double h1 = integrate_endpoint_singular(
                        [pi](double x) {
                          const double p = 0.5 * pi * std::sin(pi * x);
                          return -p * std::log(p);
                        },
                        0.0, 1.0)
                        .value;
  CHECK(true_entropy(DistributionSpec::sine_bump(1)) == Approx(h1).epsilon(1e-9));
  CHECK(true_entropy(DistributionSpec::sine_bump(3)) == Approx(3 * h1).epsilon(1e-9));
}

TEST_CASE("density", "[distributions]") {
  const std::vector<double> x{0.3};
  const std::vector<double> zero{0.0}, half{0.5}, out{1.5};
  CHECK(density(DistributionSpec::uniform_torus(1), x) == 1.0);
  CHECK(density(DistributionSpec::gaussian(1), zero) ==
        Approx(1.0 / std::sqrt(2 * std::numbers::pi)).epsilon(1e-15));
  CHECK(density(DistributionSpec::sine_bump(1), half) == Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(density(DistributionSpec::uniform_cube(1), out) == 0.0);
  CHECK(density(DistributionSpec::sine_bump(1), out) == 0.0);
  for (auto spec : {DistributionSpec::uniform_cube(1), DistributionSpec::sine_bump(1),
                    DistributionSpec::gaussian(1, 0.7)}) {
    const double lo = spec.family == Family::gaussian ? -12.0 : 0.0;
    const double hi = spec.family == Family::gaussian ? 12.0 : 1.0;
    const double mass = integrate(
                            [&](double t) {
                              const std::vector<double> p{t};
                              const double d = density(spec, p);
                              REQUIRE(d >= 0.0);
                              return d;
                            },
                            lo, hi)
                            .value;
    CHECK(std::abs(mass - 1.0) <= 1e-6);
  }
}

TEST_CASE("validation", "[distributions]") {
  CHECK_THROWS_AS(DistributionSpec::gaussian(1, 0.0).validate(), DomainError);
  CHECK_THROWS_AS(DistributionSpec::uniform_cube(0).validate(), DomainError);
  CHECK(parse_family("gaussian") == Family::gaussian);
  CHECK(to_string(Family::sine_bump) == "sine_bump");
  CHECK_THROWS(parse_family("cauchy"));
  CHECK(DistributionSpec::uniform_torus(2).space().kind() == SpaceKind::flat_torus);
  CHECK(DistributionSpec::sine_bump(2).space().kind() == SpaceKind::euclidean);
}

TEST_CASE("envelope constants", "[distributions]") {
  const std::vector<double> x{0.3};
  const auto t = envelopes(DistributionSpec::uniform_torus(1));
  CHECK(t.gamma_star(x) == 2.0);
  CHECK(t.gamma_sup(x) == 2.0);
  CHECK(t.rho == 0.5);
  CHECK(t.Gamma_0 == 1.0);
  const auto c = envelopes(DistributionSpec::uniform_cube(1));
  CHECK(c.gamma_star(x) == 1.0);
  CHECK(c.gamma_sup(x) == 2.0);
  CHECK(c.rho <= 0.5);
  const auto g = envelopes(DistributionSpec::gaussian(1));
  CHECK(std::isinf(g.Gamma_0));
  CHECK(std::isfinite(g.Gamma_0_truncated(3.0)));
  CHECK(std::isinf(g.Gamma_B(2.0)));
  CHECK(std::isfinite(g.Gamma));
  CHECK(g.Gamma > 1.0);
  for (auto spec : {DistributionSpec::uniform_cube(2), DistributionSpec::gaussian(2),
                    DistributionSpec::sine_bump(2), DistributionSpec::uniform_torus(3)}) {
    const auto env = envelopes(spec);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> p(spec.dim);
      for (auto& v : p) v = spec.family == Family::gaussian ? u(gen) : 0.25 * (u(gen) + 2.0);
      REQUIRE(env.gamma_star(p) <= env.gamma_sup(p));
    }
  }
}

TEST_CASE("envelope validity by Monte Carlo", "[distributions]") {
  // One sample of 1e5 points per family; P(B(x, r)) estimated for 1e3
  // random (x, r ≤ rho) pairs must lie within 4 SE of the envelope interval.
  const std::size_t N = 100000;
  for (auto spec : {DistributionSpec::uniform_torus(1), DistributionSpec::uniform_torus(2),
                    DistributionSpec::uniform_cube(1), DistributionSpec::uniform_cube(2),
                    DistributionSpec::gaussian(1), DistributionSpec::gaussian(2),
                    DistributionSpec::sine_bump(1), DistributionSpec::sine_bump(2)}) {
    INFO(to_string(spec.family) << " D=" << spec.dim);
    const auto env = envelopes(spec);
    const Dataset data = sample(spec, N, 99);
    const auto kind = spec.space().kind();
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> x(spec.dim);
      for (auto& v : x) v = spec.family == Family::gaussian ? 6.0 * u(gen) - 3.0 : u(gen);
      const double r = env.rho * (0.05 + 0.95 * u(gen));
      std::size_t inside = 0;
      for (std::size_t j = 0; j < N; ++j) {
        inside += oracle::distance(kind, x, data.point(j)) <= r ? 1 : 0;
      }
      const double p = double(inside) / N;
      const double lo = env.gamma_star(x) * std::pow(r, spec.dim);
      const double hi = env.gamma_sup(x) * std::pow(r, spec.dim);
      // SE at the boundary values, so an empty ball near a zero envelope passes.
      const double se_lo = std::sqrt(std::max(lo * (1 - lo), 1.0 / N) / N);
      const double se_hi = std::sqrt(std::max(hi * (1 - hi), 1.0 / N) / N);
      INFO("x0 = " << x[0] << ", r = " << r << ", p = " << p << ", env = [" << lo << ", " << hi
                   << "]");
      REQUIRE(p >= lo - 4 * se_lo);
      REQUIRE(p <= hi + 4 * se_hi);
    }
  }
}

TEST_CASE("gaussian pair correlation", "[distributions]") {
  const auto [x, y] = sample_gaussian_pair(200000, 0.5, 3);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x.point(i)[0] * y.point(i)[0];
    sxx += x.point(i)[0] * x.point(i)[0];
    syy += y.point(i)[0] * y.point(i)[0];
  }
  CHECK(sxy / std::sqrt(sxx * syy) == Approx(0.5).margin(0.01));
  CHECK_THROWS_AS(sample_gaussian_pair(10, 1.5, 1), DomainError);
}
