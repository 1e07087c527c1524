#pragma once

// Monte Carlo harness: repeated sampling at a grid of sample sizes, empirical
// bias / variance / MSE / tail probabilities / moments, log-log rate fits,
// and the matching theoretical bound values.
//
// Every trial draws from its own substream, seeded by
// substream_seed(substream_seed(base_seed, grid_index), trial_index), and
// results are reduced in trial order after all trials finish, so output is
// byte-identical for any worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "klentropy/bounds.hpp"
#include "klentropy/config.hpp"
#include "klentropy/distributions.hpp"
#include "klentropy/knn_index.hpp"

namespace klentropy::experiments {

enum class ExperimentKind {
  bias_sweep,
  variance_sweep,
  mse_sweep,
  concentration,
  moments,
  digamma_identity
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

/// Fixed k values, or k = optimal_k(n, beta, D) per grid point.
struct KRule {
  bool optimal = false;
  std::vector<int> values{1};
  double beta = 2.0;

  int k_for(std::size_t n, int dim) const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::bias_sweep;
  DistributionSpec dist;
  std::vector<std::size_t> n_grid;
  KRule k_rule;
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  /// 0 means one worker per hardware thread.
  std::size_t workers = 1;
  std::string output_path;
  DuplicatePolicy policy = DuplicatePolicy::strict;

  // Bias-bound inputs; the bias bound column is reported only when given.
  std::optional<double> beta;
  std::optional<double> C_beta;
  /// Constant of the central-moment ceiling used for the default M_4.
  double C_M = 1.0;

  /// Query point for the concentration and moments experiments.
  Point query;
  /// Radii for the concentration experiment.
  std::vector<double> r_grid;
  /// Points per validity window when r_grid is empty.
  std::size_t r_points = 20;
  /// Exponents for the moments experiment.
  std::vector<double> alphas;
  /// Failure probability of the Hoeffding margin.
  double delta = 0.01;

  /// Throws UsageError: n_grid empty or not strictly increasing, trials < 2, ...
  void validate() const;
};

/// Build a config from `key = value` text. Recognized keys: experiment,
/// family, dim, sigma, n_grid, k (int list or "optimal"), beta, C_beta, C_M,
/// trials, seed, workers, output, mode, point, r_grid, r_min, r_max,
/// r_points, alpha, delta. Unknown keys are rejected.
ExperimentConfig config_from_keys(const KeyValueConfig& keys);

/// Center of the support (0 for the gaussian); the default query point.
Point default_query(const DistributionSpec& dist);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// (ln n, ln value) pairs the fit was computed from.
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares of ln value on ln n. Throws RangeError for fewer
/// than two points or nonpositive values / sample sizes.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

inline bounds::BoundValue missing_bound() {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, false};
}

struct SweepRow {
  std::size_t n = 0;
  int k = 0;
  std::size_t trials = 0;
  double true_entropy = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  /// Standard error of the mean estimate.
  double std_error = 0.0;
  /// NaN and invalid when the family lacks the bound's parameters.
  bounds::BoundValue bias_bound = missing_bound();
  bounds::BoundValue variance_bound = missing_bound();
  bounds::BoundValue mse_bound = missing_bound();
};

struct SweepResult {
  ExperimentKind kind = ExperimentKind::bias_sweep;
  std::vector<SweepRow> rows;
  /// Fit of |bias|, variance or MSE against n; empty when a value is zero.
  std::optional<RateFit> fit;
};

/// bias_sweep, variance_sweep or mse_sweep. Throws DomainError when the family
/// has no entropy oracle, UsageError on an invalid config.
SweepResult run_sweep(const ExperimentConfig& config);

/// Raw per-trial estimates of one grid point, in trial order.
std::vector<double> entropy_trials(const DistributionSpec& dist, std::size_t n, int k,
                                   std::size_t trials, std::uint64_t seed, std::size_t workers,
                                   DuplicatePolicy policy = DuplicatePolicy::strict);

struct ConcentrationRow {
  /// "upper" or "lower" when the radius comes from a validity window,
  /// "grid" for an explicit radius grid.
  std::string window;
  double r = 0.0;
  int k = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  /// Fraction of trials with ε_k(x) > r.
  double ccdf = 0.0;
  /// Fraction of trials with ε_k(x) ≤ r.
  double cdf = 0.0;
  /// Exact P[ε_k(x) > r] where known (uniform torus, r ≤ 1/2), NaN otherwise.
  double exact_ccdf = 0.0;
  bounds::BoundValue upper;
  bounds::BoundValue lower;
  double hoeffding_margin = 0.0;
};

/// Empirical tails of ε_k(x) at the query point for each n in n_grid and each
/// k in the k rule, against both concentration bounds. Without an explicit
/// r_grid the radii are r_points equally spaced values across each of the two
/// validity windows.
std::vector<ConcentrationRow> run_concentration(const ExperimentConfig& config);

/// Validity windows of the two concentration bounds at x for (k, n), each
/// sampled at `points` equally spaced radii.
std::pair<std::vector<double>, std::vector<double>> concentration_windows(
    const DistributionSpec& dist, const Point& x, int k, std::size_t n, std::size_t points);

struct MomentRow {
  /// "power", "log_pos" or "log_neg".
  std::string statistic;
  double alpha = 0.0;
  int k = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  /// Closed-form expectation where known (uniform torus in D = 1), NaN otherwise.
  double exact = 0.0;
};

/// Empirical E[ε_k^α(x)] for each α, plus E[ln_+ ε_k(x)] and E[ln_- ε_k(x)],
/// against the closed-form bounds. Throws RangeError for an inadmissible α.
std::vector<MomentRow> run_moments(const ExperimentConfig& config);

struct IdentityRow {
  std::size_t n = 0;
  int k = 0;
  std::size_t trials = 0;
  /// Mean over trials of (1/n) Σ_i ln(c_D ε_k(X_i)^D).
  double mean = 0.0;
  double std_error = 0.0;
  /// ψ(k) - ψ(n).
  double expected = 0.0;
  double z_score = 0.0;
};

/// Checks E[ln P(B(X_i, ε_k(X_i)))] = ψ(k) - ψ(n) on the uniform torus, where
/// P(B(x, r)) = c_D r^D exactly. Throws DomainError for other families.
std::vector<IdentityRow> run_digamma_identity(const ExperimentConfig& config);

// CSV writers. Each table starts with a `#schema:` comment line.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationRow>& rows);
void write_moments_csv(std::ostream& out, const std::vector<MomentRow>& rows);
void write_identity_csv(std::ostream& out, const std::vector<IdentityRow>& rows);

/// Runs the configured experiment and writes its CSV table.
void run_experiment(const ExperimentConfig& config, std::ostream& out);

/// Calls fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace klentropy::experiments
