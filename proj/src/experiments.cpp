#include "klentropy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "klentropy/csv.hpp"
#include "klentropy/error.hpp"
#include "klentropy/estimators.hpp"
#include "klentropy/rng.hpp"
#include "klentropy/special_functions.hpp"

namespace klentropy::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
};

// Two-pass mean and variance, summed in index order.
Moments summarize(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.variance = ss / static_cast<double>(v.size() - 1);
  m.std_error = std::sqrt(m.variance / static_cast<double>(v.size()));
  return m;
}

bool is_sweep(ExperimentKind kind) {
  return kind == ExperimentKind::bias_sweep || kind == ExperimentKind::variance_sweep ||
         kind == ExperimentKind::mse_sweep;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t grid_index, std::size_t trial) {
  return substream_seed(substream_seed(base, grid_index), trial);
}

std::vector<int> k_values(const ExperimentConfig& config, std::size_t n) {
  if (config.k_rule.optimal) return {config.k_rule.k_for(n, config.dist.dim)};
  return config.k_rule.values;
}

// ε_k(x) for k = 1..k_max from one fresh sample, by full scan.
std::vector<double> query_distances(const DistributionSpec& dist, const Point& x, std::size_t n,
                                    int k_max, std::uint64_t seed) {
  const Dataset data = sample(dist, n, seed);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = distance(data.space(), x, data.point(i));
  const auto kk = static_cast<std::size_t>(k_max);
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
  d.resize(kk);
  return d;
}

// P(Bin(n, p) < k).
double binomial_cdf_below(std::size_t n, double p, int k) {
  if (p >= 1.0) return static_cast<double>(n) < k ? 1.0 : 0.0;
  if (p <= 0.0) return 1.0;
  double total = 0.0;
  const double nd = static_cast<double>(n);
  for (int j = 0; j < k && j <= static_cast<int>(n); ++j) {
    const double log_term = log_gamma(nd + 1) - log_gamma(j + 1.0) - log_gamma(nd - j + 1) +
                            j * std::log(p) + (nd - j) * std::log1p(-p);
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

double exact_ccdf(const DistributionSpec& dist, std::size_t n, int k, double r) {
  if (dist.family != Family::uniform_torus) return kNaN;
  if (r <= 0.0) return 1.0;
  const MetricSpace space = dist.space();
  if (r > space.rho()) {
    // On the circle every point is within 1/2; in higher dimensions the ball
    // measure is no longer c_D r^D.
    return dist.dim == 1 ? 0.0 : kNaN;
  }
  return binomial_cdf_below(n, ball_volume(space, r).value, k);
}

void write_bound(std::ostream& out, const bounds::BoundValue& b) {
  out << ',' << format_real(b.raw) << ',' << format_real(b.clamped) << ',' << (b.valid ? 1 : 0);
}

void write_config_line(std::ostream& out, const DistributionSpec& dist) {
  out << "#config: family=" << to_string(dist.family) << " dim=" << dist.dim;
  if (dist.family == Family::gaussian) out << " sigma=" << format_real(dist.sigma);
  out << '\n';
}

std::size_t to_size(long long v, const char* key) {
  if (v < 0) throw UsageError(std::string("config key '") + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::bias_sweep: return "bias_sweep";
    case ExperimentKind::variance_sweep: return "variance_sweep";
    case ExperimentKind::mse_sweep: return "mse_sweep";
    case ExperimentKind::concentration: return "concentration";
    case ExperimentKind::moments: return "moments";
    case ExperimentKind::digamma_identity: return "digamma_identity";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto kind : {ExperimentKind::bias_sweep, ExperimentKind::variance_sweep,
                    ExperimentKind::mse_sweep, ExperimentKind::concentration,
                    ExperimentKind::moments, ExperimentKind::digamma_identity}) {
    if (name == to_string(kind)) return kind;
  }
  throw UsageError("unknown experiment '" + std::string(name) + "'");
}

int KRule::k_for(std::size_t n, int dim) const {
  if (optimal) return bounds::optimal_k(static_cast<double>(n), beta, dim);
  if (values.size() != 1) throw UsageError("k rule has several values");
  return values.front();
}

Point default_query(const DistributionSpec& dist) {
  const double c = dist.family == Family::gaussian ? 0.0 : 0.5;
  return Point(static_cast<std::size_t>(std::max(dist.dim, 0)), c);
}

void ExperimentConfig::validate() const {
  try {
    dist.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (n_grid.empty()) throw UsageError("n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw UsageError("n_grid values must be at least 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw UsageError("n_grid must be strictly increasing");
  }
  if (trials < 2) throw UsageError("trials must be at least 2");
  if (!k_rule.optimal) {
    if (k_rule.values.empty()) throw UsageError("no k values");
    for (int k : k_rule.values) {
      if (k < 1) throw UsageError("k must be at least 1");
      // Leave-one-out estimates need k ≤ n - 1; a single query needs k ≤ n.
      const bool loo = experiment != ExperimentKind::concentration &&
                       experiment != ExperimentKind::moments;
      const std::size_t limit = loo ? n_grid.front() - 1 : n_grid.front();
      if (static_cast<std::size_t>(k) > limit) throw UsageError("k too large for the smallest n");
    }
  } else if (!(k_rule.beta > 0.0)) {
    throw UsageError("optimal k needs beta > 0");
  }
  if (experiment == ExperimentKind::concentration || experiment == ExperimentKind::moments) {
    if (query.size() != static_cast<std::size_t>(dist.dim)) {
      throw UsageError("query point has the wrong dimension");
    }
    for (double v : query) {
      if (!std::isfinite(v)) throw UsageError("query point is not finite");
    }
  }
  if (experiment == ExperimentKind::concentration) {
    for (double r : r_grid) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw UsageError("radii must be finite and >= 0");
    }
    if (r_grid.empty() && r_points < 2) throw UsageError("r_points must be at least 2");
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
  }
}

ExperimentConfig config_from_keys(const KeyValueConfig& keys) {
  ExperimentConfig c;
  c.experiment = parse_experiment_kind(keys.get_string("experiment", "bias_sweep"));
  c.dist.family = parse_family(keys.get_string("family", "uniform_torus"));
  c.dist.dim = static_cast<int>(keys.get_int("dim", 1));
  c.dist.sigma = keys.get_real("sigma", 1.0);
  for (long long n : keys.get_ints("n_grid")) c.n_grid.push_back(to_size(n, "n_grid"));

  const std::string k = keys.get_string("k", "1");
  if (k == "optimal") {
    c.k_rule.optimal = true;
  } else if (keys.contains("k")) {
    c.k_rule.values.clear();
    for (long long v : keys.get_ints("k")) {
      if (v < 1 || v > 1'000'000) throw UsageError("k values must lie in [1, 1e6]");
      c.k_rule.values.push_back(static_cast<int>(v));
    }
  }
  if (keys.contains("beta")) {
    c.beta = keys.get_real("beta", 2.0);
    c.k_rule.beta = *c.beta;
  }
  if (keys.contains("C_beta")) c.C_beta = keys.get_real("C_beta", 1.0);
  c.C_M = keys.get_real("C_M", 1.0);
  c.trials = to_size(keys.get_int("trials", 100), "trials");
  c.base_seed = keys.get_u64("seed", 1);
  c.workers = to_size(keys.get_int("workers", 1), "workers");
  c.output_path = keys.get_string("output", "");
  const std::string mode = keys.get_string("mode", "strict");
  if (mode == "strict") {
    c.policy = DuplicatePolicy::strict;
  } else if (mode == "lenient") {
    c.policy = DuplicatePolicy::lenient;
  } else {
    throw UsageError("mode must be strict or lenient");
  }

  c.query = keys.contains("point") ? keys.get_reals("point") : default_query(c.dist);
  c.r_grid = keys.get_reals("r_grid");
  c.r_points = to_size(keys.get_int("r_points", 20), "r_points");
  if (keys.contains("r_min") || keys.contains("r_max")) {
    if (!c.r_grid.empty()) throw UsageError("give either r_grid or r_min/r_max");
    const double lo = keys.get_real("r_min", 0.0);
    const double hi = keys.get_real("r_max", 0.5);
    if (!(hi > lo) || c.r_points < 2) throw UsageError("need r_max > r_min and r_points >= 2");
    for (std::size_t i = 0; i < c.r_points; ++i) {
      c.r_grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(c.r_points - 1));
    }
  }
  c.alphas = keys.get_reals("alpha");
  c.delta = keys.get_real("delta", 0.01);

  const auto unused = keys.unused_keys();
  if (!unused.empty()) throw UsageError("unknown config key '" + unused.front() + "'");
  c.validate();
  return c;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw RangeError("rate fit needs at least two points");
  RateFit fit;
  for (const auto& [n, v] : points) {
    if (!(n > 0.0) || !(v > 0.0) || !std::isfinite(n) || !std::isfinite(v)) {
      throw RangeError("rate fit needs positive finite sample sizes and values");
    }
    fit.points.emplace_back(std::log(n), std::log(v));
  }
  const double m = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw RangeError("rate fit needs at least two distinct sample sizes");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto work = [&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
          failed = true;
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> entropy_trials(const DistributionSpec& dist, std::size_t n, int k,
                                   std::size_t trials, std::uint64_t seed, std::size_t workers,
                                   DuplicatePolicy policy) {
  std::vector<double> out(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    out[t] = kl_entropy(sample(dist, n, substream_seed(seed, t)), k, policy).value;
  });
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  if (!is_sweep(config.experiment)) throw UsageError("not a sweep experiment");
  config.validate();
  const double truth = true_entropy(config.dist);
  const int dim = config.dist.dim;
  const EnvelopeData env = envelopes(config.dist);
  const double c_D = config.dist.space().ball_constant();

  SweepResult result;
  result.kind = config.experiment;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const std::size_t n = config.n_grid[g];
    const std::vector<int> ks = k_values(config, n);
    for (int k : ks) {
      if (static_cast<std::size_t>(k) >= n) throw UsageError("k must be smaller than n");
    }
    // One sample per trial is shared by every k of the grid point.
    std::vector<std::vector<double>> est(ks.size(), std::vector<double>(config.trials));
    parallel_for(config.trials, config.workers, [&](std::size_t t) {
      const KnnIndex index(sample(config.dist, n, trial_seed(config.base_seed, g, t)));
      for (std::size_t j = 0; j < ks.size(); ++j) {
        est[j][t] = kl_entropy(index, ks[j], config.policy).value;
      }
    });
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const Moments m = summarize(est[j]);
      SweepRow row;
      row.n = n;
      row.k = ks[j];
      row.trials = config.trials;
      row.true_entropy = truth;
      row.mean = m.mean;
      row.bias = m.mean - truth;
      row.variance = m.variance;
      row.mse = row.bias * row.bias + row.variance;
      row.std_error = m.std_error;
      const double nd = static_cast<double>(n);
      if (config.beta && config.C_beta) {
        row.bias_bound = bounds::bias_bound(row.k, nd, dim, *config.beta, *config.C_beta,
                                            env.Gamma_B(*config.beta), c_D);
      }
      if (dim <= 8) {
        const double N_k = static_cast<double>(row.k) * bounds::kissing_number(dim);
        const double M_4 = bounds::default_fourth_moment(dim, row.k, env.Gamma_0, config.C_M);
        row.variance_bound = bounds::variance_bound(row.k, nd, N_k, M_4);
      }
      if (config.beta && config.C_beta && dim <= 8) {
        row.mse_bound = bounds::mse_bound(row.bias_bound, row.variance_bound);
      }
      result.rows.push_back(row);
    }
  }

  // Rate fit along n when the rows form one series.
  if (config.k_rule.optimal || config.k_rule.values.size() == 1) {
    std::vector<std::pair<double, double>> pts;
    bool positive = true;
    for (const auto& row : result.rows) {
      double v = row.mse;
      if (config.experiment == ExperimentKind::bias_sweep) v = std::abs(row.bias);
      if (config.experiment == ExperimentKind::variance_sweep) v = row.variance;
      positive = positive && v > 0.0 && std::isfinite(v);
      pts.emplace_back(static_cast<double>(row.n), v);
    }
    if (positive && pts.size() >= 2) result.fit = fit_rate(pts);
  }
  return result;
}

std::pair<std::vector<double>, std::vector<double>> concentration_windows(
    const DistributionSpec& dist, const Point& x, int k, std::size_t n, std::size_t points) {
  const EnvelopeData env = envelopes(dist);
  const double gs = env.gamma_star(x);
  const double gS = env.gamma_sup(x);
  const double nd = static_cast<double>(n);
  const int dim = dist.dim;
  auto grid = [points](double lo, double hi) {
    std::vector<double> g;
    if (!(hi >= lo) || points == 0) return g;
    if (points == 1) return std::vector<double>{lo};
    for (std::size_t i = 0; i < points; ++i) {
      g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return g;
  };
  const double upper_lo = std::pow(k / (gs * nd), 1.0 / dim);
  const double lower_hi = std::min(std::pow(k / (gS * nd), 1.0 / dim), env.rho);
  return {grid(upper_lo, env.rho), grid(0.0, lower_hi)};
}

std::vector<ConcentrationRow> run_concentration(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::concentration) {
    throw UsageError("not a concentration experiment");
  }
  config.validate();
  const EnvelopeData env = envelopes(config.dist);
  const double gs = env.gamma_star(config.query);
  const double gS = env.gamma_sup(config.query);
  const int dim = config.dist.dim;
  const double margin =
      std::sqrt(std::log(2.0 / config.delta) / (2.0 * static_cast<double>(config.trials)));

  std::vector<ConcentrationRow> rows;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const std::size_t n = config.n_grid[g];
    const std::vector<int> ks = k_values(config, n);
    const int k_max = *std::max_element(ks.begin(), ks.end());
    if (static_cast<std::size_t>(k_max) > n) throw UsageError("k must not exceed n");

    std::vector<std::vector<double>> eps(config.trials);
    parallel_for(config.trials, config.workers, [&](std::size_t t) {
      eps[t] = query_distances(config.dist, config.query, n, k_max,
                               trial_seed(config.base_seed, g, t));
    });

    for (int k : ks) {
      std::vector<std::pair<std::string, double>> radii;
      if (config.r_grid.empty()) {
        const auto [up, low] = concentration_windows(config.dist, config.query, k, n,
                                                     config.r_points);
        for (double r : up) radii.emplace_back("upper", r);
        for (double r : low) radii.emplace_back("lower", r);
      } else {
        for (double r : config.r_grid) radii.emplace_back("grid", r);
      }
      const auto kk = static_cast<std::size_t>(k - 1);
      for (const auto& [window, r] : radii) {
        std::size_t above = 0;
        for (const auto& e : eps) above += e[kk] > r ? 1 : 0;
        ConcentrationRow row;
        row.window = window;
        row.r = r;
        row.k = k;
        row.n = n;
        row.trials = config.trials;
        row.ccdf = static_cast<double>(above) / static_cast<double>(config.trials);
        row.cdf = 1.0 - row.ccdf;
        row.exact_ccdf = exact_ccdf(config.dist, n, k, r);
        const double nd = static_cast<double>(n);
        row.upper = bounds::concentration_upper(r, k, nd, dim, gs, env.rho);
        row.lower = bounds::concentration_lower(r, k, nd, dim, gs, gS, env.rho);
        row.hoeffding_margin = margin;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<MomentRow> run_moments(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::moments) throw UsageError("not a moments experiment");
  config.validate();
  const EnvelopeData env = envelopes(config.dist);
  const double gs = env.gamma_star(config.query);
  const double gS = env.gamma_sup(config.query);
  const int dim = config.dist.dim;
  const bool exact_known = config.dist.family == Family::uniform_torus && dim == 1;

  // Reject inadmissible exponents before any sampling.
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    for (int k : k_values(config, config.n_grid[g])) {
      for (double a : config.alphas) {
        bounds::moment_bound(a, k, static_cast<double>(config.n_grid[g]), dim, gs, gS);
      }
    }
  }

  std::vector<MomentRow> rows;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const std::size_t n = config.n_grid[g];
    const double nd = static_cast<double>(n);
    const std::vector<int> ks = k_values(config, n);
    const int k_max = *std::max_element(ks.begin(), ks.end());
    if (static_cast<std::size_t>(k_max) > n) throw UsageError("k must not exceed n");

    std::vector<std::vector<double>> eps(config.trials);
    parallel_for(config.trials, config.workers, [&](std::size_t t) {
      eps[t] = query_distances(config.dist, config.query, n, k_max,
                               trial_seed(config.base_seed, g, t));
    });

    for (int k : ks) {
      const auto kk = static_cast<std::size_t>(k - 1);
      auto add = [&](std::string name, double alpha, auto&& stat, double bound, double exact) {
        std::vector<double> v(config.trials);
        for (std::size_t t = 0; t < config.trials; ++t) v[t] = stat(eps[t][kk]);
        const Moments m = summarize(v);
        MomentRow row;
        row.statistic = std::move(name);
        row.alpha = alpha;
        row.k = k;
        row.n = n;
        row.trials = config.trials;
        row.mean = m.mean;
        row.std_error = m.std_error;
        row.bound = bound;
        row.exact = exact;
        rows.push_back(row);
      };
      for (double a : config.alphas) {
        double exact = kNaN;
        if (exact_known) {
          // 2 ε_k ~ Beta(k, n - k + 1).
          exact = std::exp(-a * std::log(2.0) + log_gamma(k + a) + log_gamma(nd + 1) -
                           log_gamma(k) - log_gamma(nd + a + 1));
        }
        add("power", a, [a](double e) { return a == 0.0 ? 1.0 : std::pow(e, a); },
            bounds::moment_bound(a, k, nd, dim, gs, gS), exact);
      }
      add("log_pos", kNaN, [](double e) { return std::max(0.0, std::log(e)); },
          bounds::log_positive_part_bound(k, nd, dim, gs), exact_known ? 0.0 : kNaN);
      add("log_neg", kNaN, [](double e) { return std::max(0.0, -std::log(e)); },
          bounds::log_negative_part_bound(k, nd, dim, gs, gS),
          exact_known ? std::log(2.0) - digamma(k) + digamma(nd + 1) : kNaN);
    }
  }
  return rows;
}

std::vector<IdentityRow> run_digamma_identity(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::digamma_identity) {
    throw UsageError("not a digamma identity experiment");
  }
  config.validate();
  if (config.dist.family != Family::uniform_torus) {
    throw DomainError("the digamma identity check needs the uniform torus, where P(B) is exact");
  }
  const double log_c = std::log(config.dist.space().ball_constant());
  const int dim = config.dist.dim;

  std::vector<IdentityRow> rows;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const std::size_t n = config.n_grid[g];
    const std::vector<int> ks = k_values(config, n);
    for (int k : ks) {
      if (static_cast<std::size_t>(k) >= n) throw UsageError("k must be smaller than n");
    }
    std::vector<std::vector<double>> means(ks.size(), std::vector<double>(config.trials));
    parallel_for(config.trials, config.workers, [&](std::size_t t) {
      const KnnIndex index(sample(config.dist, n, trial_seed(config.base_seed, g, t)));
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const KnnResult res = loo_knn_distances(index, ks[j], config.policy);
        double sum = 0.0;
        std::size_t kept = 0;
        for (double e : res.eps) {
          if (e == 0.0) continue;
          sum += log_c + dim * std::log(e);
          ++kept;
        }
        means[j][t] = kept ? sum / static_cast<double>(kept) : kNaN;
      }
    });
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const Moments m = summarize(means[j]);
      IdentityRow row;
      row.n = n;
      row.k = ks[j];
      row.trials = config.trials;
      row.mean = m.mean;
      row.std_error = m.std_error;
      row.expected = digamma(ks[j]) - digamma(static_cast<double>(n));
      row.z_score = (row.mean - row.expected) / row.std_error;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "#schema: " << to_string(result.kind)
      << " n,k,trials,true_entropy,mean,bias,variance,mse,std_error,"
         "bias_bound_raw,bias_bound_valid,variance_bound_raw,variance_bound_valid,"
         "mse_bound_raw,mse_bound_valid\n";
  out << "n,k,trials,true_entropy,mean,bias,variance,mse,std_error,bias_bound_raw,"
         "bias_bound_valid,variance_bound_raw,variance_bound_valid,mse_bound_raw,"
         "mse_bound_valid\n";
  for (const auto& r : result.rows) {
    out << r.n << ',' << r.k << ',' << r.trials << ',' << format_real(r.true_entropy) << ','
        << format_real(r.mean) << ',' << format_real(r.bias) << ',' << format_real(r.variance)
        << ',' << format_real(r.mse) << ',' << format_real(r.std_error);
    for (const auto* b : {&r.bias_bound, &r.variance_bound, &r.mse_bound}) {
      out << ',' << format_real(b->raw) << ',' << (b->valid ? 1 : 0);
    }
    out << '\n';
  }
  if (result.fit) {
    out << "#fit: slope=" << format_real(result.fit->slope)
        << " intercept=" << format_real(result.fit->intercept)
        << " r_squared=" << format_real(result.fit->r_squared) << '\n';
  }
}

void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationRow>& rows) {
  const char* cols =
      "window,n,k,trials,r,ccdf,cdf,exact_ccdf,upper_raw,upper_clamped,upper_valid,"
      "lower_raw,lower_clamped,lower_valid,hoeffding_margin";
  out << "#schema: concentration " << cols << '\n' << cols << '\n';
  for (const auto& r : rows) {
    out << r.window << ',' << r.n << ',' << r.k << ',' << r.trials << ',' << format_real(r.r)
        << ',' << format_real(r.ccdf) << ',' << format_real(r.cdf) << ','
        << format_real(r.exact_ccdf);
    write_bound(out, r.upper);
    write_bound(out, r.lower);
    out << ',' << format_real(r.hoeffding_margin) << '\n';
  }
}

void write_moments_csv(std::ostream& out, const std::vector<MomentRow>& rows) {
  const char* cols = "statistic,alpha,n,k,trials,mean,std_error,bound,exact";
  out << "#schema: moments " << cols << '\n' << cols << '\n';
  for (const auto& r : rows) {
    out << r.statistic << ',' << format_real(r.alpha) << ',' << r.n << ',' << r.k << ','
        << r.trials << ',' << format_real(r.mean) << ',' << format_real(r.std_error) << ','
        << format_real(r.bound) << ',' << format_real(r.exact) << '\n';
  }
}

void write_identity_csv(std::ostream& out, const std::vector<IdentityRow>& rows) {
  const char* cols = "n,k,trials,mean,std_error,expected,z_score";
  out << "#schema: digamma_identity " << cols << '\n' << cols << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.k << ',' << r.trials << ',' << format_real(r.mean) << ','
        << format_real(r.std_error) << ',' << format_real(r.expected) << ','
        << format_real(r.z_score) << '\n';
  }
}

void run_experiment(const ExperimentConfig& config, std::ostream& out) {
  switch (config.experiment) {
    case ExperimentKind::bias_sweep:
    case ExperimentKind::variance_sweep:
    case ExperimentKind::mse_sweep: {
      const auto result = run_sweep(config);
      write_config_line(out, config.dist);
      write_sweep_csv(out, result);
      return;
    }
    case ExperimentKind::concentration: {
      const auto rows = run_concentration(config);
      write_config_line(out, config.dist);
      write_concentration_csv(out, rows);
      return;
    }
    case ExperimentKind::moments: {
      const auto rows = run_moments(config);
      write_config_line(out, config.dist);
      write_moments_csv(out, rows);
      return;
    }
    case ExperimentKind::digamma_identity: {
      const auto rows = run_digamma_identity(config);
      write_config_line(out, config.dist);
      write_identity_csv(out, rows);
      return;
    }
  }
}

}  // namespace klentropy::experiments
