#include "klentropy/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "klentropy/error.hpp"
#include "klentropy/quadrature.hpp"
#include "klentropy/special_functions.hpp"

namespace klentropy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr double kSineBumpRho = 0.25;
constexpr double kEnvelopeTolerance = 1e-9;

double norm(std::span<const double> x) {
  double acc = 0.0;
  for (double c : x) acc += c * c;
  return std::sqrt(acc);
}

double gaussian_log_density_at_radius(const DistributionSpec& g, double t) {
  const double s2 = g.sigma * g.sigma;
  return -0.5 * g.dim * std::log(2.0 * kPi * s2) - t * t / (2.0 * s2);
}

// E[h(|X|)] for X ~ N(0, σ² I_D), given log h as a function of |X|.
// Returns +inf when the integral diverges (caller decides when that happens).
double gaussian_radial_expectation(const DistributionSpec& g,
                                   const std::function<double(double)>& log_h) {
  const int dim = g.dim;
  const double log_norm = (0.5 * dim - 1.0) * std::log(2.0) + log_gamma(0.5 * dim);
  auto integrand = [&](double u) {
    double log_f = -0.5 * u * u - log_norm;
    if (dim > 1) log_f += (dim - 1) * std::log(u);
    return std::exp(log_f + log_h(g.sigma * u));
  };
  return integrate_to_infinity(integrand, 0.0, kEnvelopeTolerance).value;
}

// Per-coordinate envelope factors of the sine bump.
double sine_low(double x) {
  const double toward = x <= 0.5 ? x + kSineBumpRho : x - kSineBumpRho;
  return 0.5 * kPi * std::min(std::sin(kPi * x), std::sin(kPi * toward));
}

double sine_high(double x) {
  if (std::abs(x - 0.5) <= kSineBumpRho) return 0.5 * kPi;
  const double nearest = x < 0.5 ? x + kSineBumpRho : x - kSineBumpRho;
  return 0.5 * kPi * std::sin(kPi * nearest);
}

// E[h(X)] for X with density (π/2) sin(πx) on (0, 1); h may blow up
// integrably at the endpoints.
double sine_expectation(const std::function<double(double)>& h) {
  constexpr std::array<double, 7> breaks = {0.0, 0.25, 0.375, 0.5, 0.625, 0.75, 1.0};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += integrate_endpoint_singular(
                 [&](double x) { return 0.5 * kPi * std::sin(kPi * x) * h(x); }, breaks[i],
                 breaks[i + 1], kEnvelopeTolerance)
                 .value;
  }
  return total;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::uniform_cube:
      return "uniform_cube";
    case Family::uniform_torus:
      return "uniform_torus";
    case Family::gaussian:
      return "gaussian";
    case Family::sine_bump:
      return "sine_bump";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "uniform_cube") return Family::uniform_cube;
  if (name == "uniform_torus") return Family::uniform_torus;
  if (name == "gaussian") return Family::gaussian;
  if (name == "sine_bump") return Family::sine_bump;
  throw UsageError("unknown distribution family '" + std::string(name) + "'");
}

void DistributionSpec::validate() const {
  if (dim < 1) throw DomainError("distribution: dimension must be >= 1");
  if (family == Family::gaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw DomainError("distribution: gaussian sigma must be positive and finite");
  }
}

MetricSpace DistributionSpec::space() const {
  validate();
  return family == Family::uniform_torus ? MetricSpace::flat_torus(dim)
                                         : MetricSpace::euclidean(dim);
}

Dataset sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(dist, n, rng);
}

Dataset sample(const DistributionSpec& dist, std::size_t n, Rng& rng) {
  const MetricSpace space = dist.space();
  if (n < 1) throw RangeError("sample: n must be >= 1");
  std::vector<double> coords(n * static_cast<std::size_t>(dist.dim));
  switch (dist.family) {
    case Family::uniform_cube:
    case Family::uniform_torus:
      for (double& c : coords) c = rng.uniform();
      break;
    case Family::gaussian:
      for (double& c : coords) c = dist.sigma * rng.normal();
      break;
    case Family::sine_bump:
      // Inverse of the CDF (1 - cos πx) / 2.
      for (double& c : coords) c = std::acos(1.0 - 2.0 * rng.uniform_open()) / kPi;
      break;
  }
  return Dataset(space, std::move(coords));
}

std::pair<Dataset, Dataset> sample_gaussian_pair(std::size_t n, double rho, std::uint64_t seed) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("sample_gaussian_pair: need |rho| <= 1");
  if (n < 1) throw RangeError("sample_gaussian_pair: n must be >= 1");
  Rng rng(seed);
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  const double tail = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    xs[i] = z1;
    ys[i] = rho * z1 + tail * z2;
  }
  return {Dataset(MetricSpace::euclidean(1), std::move(xs)),
          Dataset(MetricSpace::euclidean(1), std::move(ys))};
}

double true_entropy(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::uniform_cube:
    case Family::uniform_torus:
      return 0.0;
    case Family::gaussian:
      return 0.5 * dist.dim * std::log(2.0 * kPi * std::numbers::e * dist.sigma * dist.sigma);
    case Family::sine_bump:
      // -∫ p ln p per coordinate = 1 - ln π.
      return dist.dim * (1.0 - std::log(kPi));
  }
  return 0.0;
}

double density(const DistributionSpec& dist, std::span<const double> x) {
  dist.validate();
  if (x.size() != static_cast<std::size_t>(dist.dim)) {
    throw DimensionMismatch("density: point dimension does not match distribution");
  }
  switch (dist.family) {
    case Family::uniform_torus:
      return 1.0;
    case Family::uniform_cube:
      for (double c : x) {
        if (c < 0.0 || c > 1.0) return 0.0;
      }
      return 1.0;
    case Family::gaussian:
      return std::exp(gaussian_log_density_at_radius(dist, norm(x)));
    case Family::sine_bump: {
      double p = 1.0;
      for (double c : x) {
        if (c <= 0.0 || c >= 1.0) return 0.0;
        p *= 0.5 * kPi * std::sin(kPi * c);
      }
      return p;
    }
  }
  return 0.0;
}

EnvelopeData envelopes(const DistributionSpec& dist) {
  dist.validate();
  const int dim = dist.dim;
  const double c_d = unit_ball_volume(dim);
  EnvelopeData env;
  env.C_T = kInf;

  switch (dist.family) {
    case Family::uniform_torus:
    case Family::uniform_cube: {
      const bool torus = dist.family == Family::uniform_torus;
      const double lo = torus ? c_d : c_d * std::pow(2.0, -dim);
      const double hi = c_d;
      env.rho = 0.5;
      env.gamma_star = [lo](std::span<const double>) { return lo; };
      env.gamma_sup = [hi](std::span<const double>) { return hi; };
      env.Gamma_0 = hi / lo;
      env.Gamma_0_truncated = [ratio = hi / lo](double) { return ratio; };
      env.Gamma = hi / lo;
      env.Gamma_B = [lo, dim](double beta) { return std::pow(lo, -(beta + dim) / dim); };
      env.Gamma_star_lambda = [lo, dim](double lambda) { return std::pow(lo, -lambda / dim); };
      env.Gamma_sup_lambda = [hi, dim](double lambda) { return std::pow(hi, lambda / dim); };
      break;
    }
    case Family::gaussian: {
      const double rho = dist.sigma;
      const double log_c = std::log(c_d);
      env.rho = rho;
      env.gamma_star = [dist, rho, log_c](std::span<const double> x) {
        return std::exp(log_c + gaussian_log_density_at_radius(dist, norm(x) + rho));
      };
      env.gamma_sup = [dist, rho, log_c](std::span<const double> x) {
        return std::exp(log_c + gaussian_log_density_at_radius(dist, std::max(norm(x) - rho, 0.0)));
      };
      const auto log_ratio = [dist, rho](double t) {
        return gaussian_log_density_at_radius(dist, std::max(t - rho, 0.0)) -
               gaussian_log_density_at_radius(dist, t + rho);
      };
      env.Gamma_0 = kInf;
      env.Gamma_0_truncated = [log_ratio](double radius) { return std::exp(log_ratio(radius)); };
      env.Gamma = gaussian_radial_expectation(dist, log_ratio);
      // γ_*^{-a} grows like exp(a t²/2σ²) against the exp(-t²/2σ²) density,
      // so the expectation is finite only for a < 1.
      env.Gamma_B = [](double) { return kInf; };
      env.Gamma_star_lambda = [dist, rho, log_c, dim](double lambda) {
        const double a = lambda / dim;
        if (a >= 1.0) return kInf;
        return gaussian_radial_expectation(dist, [&](double t) {
          return -a * (log_c + gaussian_log_density_at_radius(dist, t + rho));
        });
      };
      env.Gamma_sup_lambda = [dist, rho, log_c, dim](double lambda) {
        const double a = lambda / dim;
        return gaussian_radial_expectation(dist, [&](double t) {
          return a * (log_c + gaussian_log_density_at_radius(dist, std::max(t - rho, 0.0)));
        });
      };
      break;
    }
    case Family::sine_bump: {
      const double lo_scale = c_d * std::pow(2.0, -dim);
      env.rho = kSineBumpRho;
      env.gamma_star = [lo_scale](std::span<const double> x) {
        double g = lo_scale;
        for (double c : x) g *= (c <= 0.0 || c >= 1.0) ? 0.0 : sine_low(c);
        return g;
      };
      env.gamma_sup = [c_d](std::span<const double> x) {
        double g = c_d;
        for (double c : x) g *= sine_high(std::clamp(c, 0.0, 1.0));
        return g;
      };
      env.Gamma_0 = kInf;
      env.Gamma_0_truncated = [](double) { return kInf; };
      // The envelopes are products over coordinates and the coordinates are
      // independent, so every expectation is a D-th power of a 1-D one.
      const double ratio_1d = sine_expectation([](double x) { return sine_high(x) / sine_low(x); });
      env.Gamma = std::pow(2.0, dim) * std::pow(ratio_1d, dim);
      env.Gamma_B = [lo_scale, dim](double beta) {
        const double a = (beta + dim) / dim;
        // p ~ x and sine_low ~ x near 0: integrable iff a < 2.
        if (a >= 2.0) return kInf;
        const double e1 = sine_expectation([a](double x) { return std::pow(sine_low(x), -a); });
        return std::pow(lo_scale, -a) * std::pow(e1, dim);
      };
      env.Gamma_star_lambda = [lo_scale, dim](double lambda) {
        const double a = lambda / dim;
        if (a >= 2.0) return kInf;
        const double e1 = sine_expectation([a](double x) { return std::pow(sine_low(x), -a); });
        return std::pow(lo_scale, -a) * std::pow(e1, dim);
      };
      env.Gamma_sup_lambda = [c_d, dim](double lambda) {
        const double a = lambda / dim;
        const double e1 = sine_expectation([a](double x) { return std::pow(sine_high(x), a); });
        return std::pow(c_d, a) * std::pow(e1, dim);
      };
      break;
    }
  }
  return env;
}

}  // namespace klentropy
