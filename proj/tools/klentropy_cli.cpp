// klentropy command line: estimates, Monte Carlo experiments and bound curves.
//
// Exit codes: 0 success, 1 usage error, 2 numeric or validity failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "klentropy/bounds.hpp"
#include "klentropy/config.hpp"
#include "klentropy/csv.hpp"
#include "klentropy/distributions.hpp"
#include "klentropy/error.hpp"
#include "klentropy/estimators.hpp"
#include "klentropy/experiments.hpp"
#include "klentropy/special_functions.hpp"

using namespace klentropy;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> workers;
  std::string out;
};

// Flags shared by the experiment subcommands, collected as config keys.
struct ExperimentFlags {
  std::string family = "uniform_torus";
  int dim = 1;
  double sigma = 1.0;
  std::string n_grid;
  std::string k = "1";
  std::optional<double> beta;
  std::string point;
  std::string r_grid;
  std::size_t r_points = 20;
  std::string alpha;
  double delta = 0.01;
  std::string mode = "strict";
};

void add_dist_flags(CLI::App* app, ExperimentFlags& f) {
  app->add_option("--dist", f.family, "uniform_cube | uniform_torus | gaussian | sine_bump")
      ->capture_default_str();
  app->add_option("--dim", f.dim, "dimension D")->capture_default_str();
  app->add_option("--sigma", f.sigma, "gaussian standard deviation")->capture_default_str();
}

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
  add_dist_flags(app, f);
  app->add_option("--n", f.n_grid, "sample sizes, comma separated, increasing")->required();
  app->add_option("--k", f.k, "k values, comma separated, or 'optimal'")->capture_default_str();
  app->add_option("--beta", f.beta, "smoothness for k=optimal");
  app->add_option("--mode", f.mode, "strict | lenient")->capture_default_str();
}

KeyValueConfig to_keys(const std::string& experiment, const ExperimentFlags& f,
                       const Globals& g) {
  KeyValueConfig keys;
  keys.set("experiment", experiment);
  keys.set("family", f.family);
  keys.set("dim", std::to_string(f.dim));
  keys.set("sigma", format_real(f.sigma));
  keys.set("n_grid", f.n_grid);
  keys.set("k", f.k);
  keys.set("mode", f.mode);
  if (f.beta) keys.set("beta", format_real(*f.beta));
  if (!f.point.empty()) keys.set("point", f.point);
  if (!f.r_grid.empty()) keys.set("r_grid", f.r_grid);
  keys.set("r_points", std::to_string(f.r_points));
  if (!f.alpha.empty()) keys.set("alpha", f.alpha);
  keys.set("delta", format_real(f.delta));
  if (g.seed) keys.set("seed", std::to_string(*g.seed));
  if (g.trials) keys.set("trials", std::to_string(*g.trials));
  if (g.workers) keys.set("workers", std::to_string(*g.workers));
  return keys;
}

// Writes to --out when given, stdout otherwise.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

DuplicatePolicy parse_mode(const std::string& mode) {
  if (mode == "strict") return DuplicatePolicy::strict;
  if (mode == "lenient") return DuplicatePolicy::lenient;
  throw UsageError("--mode must be strict or lenient");
}

double unit_factor(const std::string& unit) {
  if (unit == "nats") return 1.0;
  if (unit == "bits") return 1.0 / std::numbers::ln2;
  throw UsageError("--unit must be nats or bits");
}

Dataset read_input(const std::string& path, const std::string& space) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  return read_dataset_csv(in, parse_space_kind(space));
}

DistributionSpec make_dist(const ExperimentFlags& f) {
  DistributionSpec d{parse_family(f.family), f.dim, f.sigma};
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return d;
}

std::vector<double> parse_reals(const std::string& list) {
  std::vector<double> out;
  for (const auto& item : split_list(list)) out.push_back(parse_real(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-nearest-neighbor entropy estimation, bound calculators and Monte Carlo checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "base seed of all random streams");
  app.add_option("--trials", g.trials, "Monte Carlo trials");
  app.add_option("--workers", g.workers, "worker threads (0 = all cores); never changes output");
  app.add_option("--out", g.out, "output file (default stdout)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Kozachenko-Leonenko entropy estimate");
  std::string input, space = "euclidean", mode = "strict", unit = "nats", backend = "auto";
  std::size_t n = 1000;
  int k = 1;
  ExperimentFlags dist_flags;
  estimate->add_option("--input", input, "CSV file, one point per row (overrides --dist)");
  estimate->add_option("--space", space, "euclidean | torus (for --input)")->capture_default_str();
  add_dist_flags(estimate, dist_flags);
  estimate->add_option("--n", n, "sample size when sampling from --dist")->capture_default_str();
  estimate->add_option("--k", k, "neighbor order")->capture_default_str();
  estimate->add_option("--mode", mode, "strict | lenient")->capture_default_str();
  estimate->add_option("--unit", unit, "nats | bits")->capture_default_str();
  estimate->add_option("--backend", backend, "auto | kd_tree | brute_force")->capture_default_str();

  // mi
  auto* mi = app.add_subcommand("mi", "mutual information via H(X) + H(Y) - H(X,Y)");
  std::string x_path, y_path;
  std::optional<double> rho;
  mi->add_option("--x", x_path, "CSV of X samples");
  mi->add_option("--y", y_path, "CSV of Y samples (same row count)");
  mi->add_option("--space", space, "euclidean | torus (for --x/--y)")->capture_default_str();
  mi->add_option("--rho", rho, "sample a standard bivariate normal pair with this correlation");
  mi->add_option("--n", n, "sample size with --rho")->capture_default_str();
  mi->add_option("--k", k, "neighbor order")->capture_default_str();
  mi->add_option("--mode", mode, "strict | lenient")->capture_default_str();
  mi->add_option("--unit", unit, "nats | bits")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run an experiment described by a config file");
  std::string config_path;
  sweep->add_option("--config", config_path, "key = value config file")->required();

  // concentration / moments / identity
  ExperimentFlags conc_flags, mom_flags, id_flags;
  auto* conc = app.add_subcommand("concentration", "empirical tails of eps_k(x) vs the bounds");
  add_experiment_flags(conc, conc_flags);
  conc->add_option("--point", conc_flags.point, "query point, comma separated");
  conc->add_option("--r-grid", conc_flags.r_grid, "radii; default: both validity windows");
  conc->add_option("--r-points", conc_flags.r_points, "points per validity window")
      ->capture_default_str();
  conc->add_option("--delta", conc_flags.delta, "Hoeffding failure probability")
      ->capture_default_str();
  auto* mom = app.add_subcommand("moments", "empirical moments of eps_k(x) vs the bounds");
  add_experiment_flags(mom, mom_flags);
  mom->add_option("--point", mom_flags.point, "query point, comma separated");
  mom->add_option("--alpha", mom_flags.alpha, "exponents, comma separated");
  auto* identity = app.add_subcommand("identity", "digamma identity check on the uniform torus");
  add_experiment_flags(identity, id_flags);

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate a bound formula, optionally along a grid");
  std::string kind;
  std::string param = "r", values;
  double r = 0.1, gamma_star = 1.0, gamma_sup = NAN, rho_env = INFINITY, alpha = 1.0, beta = 2.0;
  double C_beta = 1.0, Gamma_B = 1.0, c_D = NAN, L = 1.0, Gamma = 1.0, N_k = NAN, M_4 = 1.0;
  double lambda = 1.0, C_M = 1.0, C_T = 0.0, n_real = 100;
  int dim = 1, ell = 4;
  std::string statistic = "log";
  bnd->add_option("--kind", kind,
                  "concentration_upper | concentration_lower | expectation_upper | "
                  "expectation_lower | log_positive | log_negative | moment | bias | "
                  "holder_bias | variance | moment_ceiling | optimal_k | c1 | c2 | c3")
      ->required();
  bnd->add_option("--param", param, "curve parameter: r | n | k | alpha")->capture_default_str();
  bnd->add_option("--values", values, "curve parameter values, comma separated");
  bnd->add_option("--r", r, "radius")->capture_default_str();
  bnd->add_option("--k", k, "neighbor order")->capture_default_str();
  bnd->add_option("--n", n_real, "sample size")->capture_default_str();
  bnd->add_option("--dim", dim, "dimension D")->capture_default_str();
  bnd->add_option("--gamma-star", gamma_star, "lower envelope value")->capture_default_str();
  bnd->add_option("--gamma-sup", gamma_sup, "upper envelope value (default gamma-star)");
  bnd->add_option("--rho", rho_env, "radius of envelope validity");
  bnd->add_option("--alpha", alpha, "moment exponent")->capture_default_str();
  bnd->add_option("--beta", beta, "smoothness exponent")->capture_default_str();
  bnd->add_option("--C-beta", C_beta, "smoothing constant")->capture_default_str();
  bnd->add_option("--Gamma-B", Gamma_B, "tail constant of the bias bound")->capture_default_str();
  bnd->add_option("--c-D", c_D, "ball constant (default Euclidean unit-ball volume)");
  bnd->add_option("--L", L, "Hoelder constant")->capture_default_str();
  bnd->add_option("--Gamma", Gamma, "E[gamma^*/gamma_*]")->capture_default_str();
  bnd->add_option("--N-k", N_k, "k-NN in-degree bound (default k * kissing number)");
  bnd->add_option("--M4", M_4, "fourth central moment bound")->capture_default_str();
  bnd->add_option("--ell", ell, "moment order")->capture_default_str();
  bnd->add_option("--lambda", lambda, "moment ceiling rate")->capture_default_str();
  bnd->add_option("--C-M", C_M, "moment ceiling constant")->capture_default_str();
  bnd->add_option("--C-T", C_T, "tail constant of the expectation bounds")->capture_default_str();
  bnd->add_option("--statistic", statistic, "log | power | negative_power")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Output out(g.out);
    std::ostream& os = out.stream();

    if (estimate->parsed()) {
      const double factor = unit_factor(unit);
      const DuplicatePolicy policy = parse_mode(mode);
      KnnBackend kb = KnnBackend::automatic;
      if (backend == "kd_tree") kb = KnnBackend::kd_tree;
      else if (backend == "brute_force") kb = KnnBackend::brute_force;
      else if (backend != "auto") throw UsageError("--backend must be auto, kd_tree or brute_force");
      std::optional<double> truth;
      std::optional<Dataset> data;
      if (!input.empty()) {
        data = read_input(input, space);
      } else {
        const DistributionSpec d = make_dist(dist_flags);
        data = sample(d, n, g.seed.value_or(1));
        truth = true_entropy(d);
      }
      const auto h = kl_entropy(*data, k, policy, kb);
      os << "#schema: estimate entropy,unit,n,k,dropped_points,true_entropy\n";
      os << "entropy,unit,n,k,dropped_points,true_entropy\n";
      os << format_real(h.value * factor) << ',' << unit << ',' << h.n << ',' << h.k << ','
         << h.dropped_points << ',' << (truth ? format_real(*truth * factor) : "") << '\n';
      if (h.dropped_points > 0) {
        std::cerr << "warning: " << h.dropped_points << " point(s) with zero distance dropped\n";
      }
      return 0;
    }

    if (mi->parsed()) {
      const double factor = unit_factor(unit);
      std::optional<Dataset> x, y;
      if (rho) {
        if (!x_path.empty() || !y_path.empty()) throw UsageError("give --rho or --x/--y, not both");
        auto pair = sample_gaussian_pair(n, *rho, g.seed.value_or(1));
        x = std::move(pair.first);
        y = std::move(pair.second);
      } else {
        if (x_path.empty() || y_path.empty()) throw UsageError("mi needs --x and --y, or --rho");
        x = read_input(x_path, space);
        y = read_input(y_path, space);
      }
      const auto res = mutual_information(*x, *y, k, parse_mode(mode));
      os << "#schema: mi mi,unit,h_x,h_y,h_joint,identical_neighbor_fraction,degenerate\n";
      os << "mi,unit,h_x,h_y,h_joint,identical_neighbor_fraction,degenerate\n";
      os << format_real(res.value * factor) << ',' << unit << ','
         << format_real(res.h_x.value * factor) << ',' << format_real(res.h_y.value * factor)
         << ',' << format_real(res.h_joint.value * factor) << ','
         << format_real(res.identical_neighbor_fraction) << ',' << (res.degenerate ? 1 : 0)
         << '\n';
      if (res.degenerate) {
        std::cerr << "warning: joint and marginal neighbor sets coincide; Y looks like a "
                     "deterministic function of X and the true MI is infinite\n";
      }
      return 0;
    }

    if (sweep->parsed()) {
      KeyValueConfig keys = KeyValueConfig::parse_file(config_path);
      if (g.seed) keys.set("seed", std::to_string(*g.seed));
      if (g.trials) keys.set("trials", std::to_string(*g.trials));
      if (g.workers) keys.set("workers", std::to_string(*g.workers));
      auto config = experiments::config_from_keys(keys);
      if (g.out.empty() && !config.output_path.empty()) {
        Output file(config.output_path);
        experiments::run_experiment(config, file.stream());
      } else {
        experiments::run_experiment(config, os);
      }
      return 0;
    }

    for (auto [sub, flags, name] :
         {std::tuple{conc, &conc_flags, "concentration"}, std::tuple{mom, &mom_flags, "moments"},
          std::tuple{identity, &id_flags, "digamma_identity"}}) {
      if (!sub->parsed()) continue;
      const auto config = experiments::config_from_keys(to_keys(name, *flags, g));
      experiments::run_experiment(config, os);
      return 0;
    }

    if (bnd->parsed()) {
      if (std::isnan(gamma_sup)) gamma_sup = gamma_star;
      std::vector<double> grid;
      if (values.empty()) {
        grid.push_back(param == "r" ? r : param == "n" ? n_real : param == "k" ? k : alpha);
      } else {
        grid = parse_reals(values);
      }
      if (param != "r" && param != "n" && param != "k" && param != "alpha") {
        throw UsageError("--param must be r, n, k or alpha");
      }
      std::vector<bounds::CurvePoint> curve;
      for (double v : grid) {
        double rr = r, nn = n_real, aa = alpha;
        int kk = k;
        if (param == "r") rr = v;
        if (param == "n") nn = v;
        if (param == "alpha") aa = v;
        if (param == "k") {
          if (v < 1 || v != std::floor(v)) throw UsageError("k values must be positive integers");
          kk = static_cast<int>(v);
        }
        const double cd = std::isnan(c_D) ? unit_ball_volume(dim) : c_D;
        auto plain = [](double value) { return bounds::BoundValue{value, value, true}; };
        bounds::Statistic stat;
        if (statistic == "log") stat = bounds::log_statistic();
        else if (statistic == "power") stat = bounds::power_statistic(aa);
        else if (statistic == "negative_power") stat = bounds::negative_power_statistic(aa);
        else throw UsageError("--statistic must be log, power or negative_power");

        bounds::BoundValue b;
        if (kind == "concentration_upper") {
          b = bounds::concentration_upper(rr, kk, nn, dim, gamma_star, rho_env);
        } else if (kind == "concentration_lower") {
          b = bounds::concentration_lower(rr, kk, nn, dim, gamma_star, gamma_sup, rho_env);
        } else if (kind == "expectation_upper") {
          b = plain(bounds::expectation_upper_bound(stat, kk, nn, dim, gamma_star, C_T));
        } else if (kind == "expectation_lower") {
          b = plain(bounds::expectation_lower_bound(stat, kk, nn, dim, gamma_star, gamma_sup, C_T));
        } else if (kind == "log_positive") {
          b = plain(bounds::log_positive_part_bound(kk, nn, dim, gamma_star));
        } else if (kind == "log_negative") {
          b = plain(bounds::log_negative_part_bound(kk, nn, dim, gamma_star, gamma_sup));
        } else if (kind == "moment") {
          b = plain(bounds::moment_bound(aa, kk, nn, dim, gamma_star, gamma_sup));
        } else if (kind == "bias") {
          b = bounds::bias_bound(kk, nn, dim, beta, C_beta, Gamma_B, cd);
        } else if (kind == "holder_bias") {
          b = bounds::holder_bias_bound(kk, nn, dim, beta, L, Gamma, cd);
        } else if (kind == "variance") {
          const double nk = std::isnan(N_k) ? kk * bounds::kissing_number(dim) : N_k;
          b = bounds::variance_bound(kk, nn, nk, M_4);
        } else if (kind == "moment_ceiling") {
          b = plain(bounds::moment_ceiling(ell, lambda, C_M));
        } else if (kind == "optimal_k") {
          b = plain(bounds::optimal_k(nn, beta, dim));
        } else if (kind == "c1") {
          b = plain(bounds::c1(kk, dim, gamma_star, gamma_sup));
        } else if (kind == "c2") {
          b = plain(bounds::c2(aa, dim));
        } else if (kind == "c3") {
          b = plain(bounds::c3(aa, kk, dim, gamma_star, gamma_sup));
        } else {
          throw UsageError("unknown bound kind '" + kind + "'");
        }
        curve.push_back({v, b});
      }
      bounds::write_curve_csv(os, kind, curve);
      bool all_valid = true;
      for (const auto& p : curve) all_valid = all_valid && p.bound.valid;
      if (!all_valid) std::cerr << "warning: some points lie outside the bound's validity range\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
