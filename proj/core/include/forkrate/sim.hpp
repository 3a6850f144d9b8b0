#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "forkrate/params.hpp"

namespace forkrate {

enum class Scheme { iid, ar, many };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// One Monte Carlo experiment: n_paths independent backlog paths, each run for
// `horizon` periods from Q_0 = 0, recording Q = max_t Q_t (the finite-horizon
// surrogate for the supremum; horizon 2000 is where the tail saturates for
// the stable parameter sets in scope).
struct SimConfig {
  Scheme scheme = Scheme::iid;
  std::variant<IidParams, ArParams, ManyParams> params = IidParams{};
  std::int64_t horizon = 2000;
  std::int64_t n_paths = 10000;
  std::uint64_t seed = 1;
  std::vector<double> omega_grid;  // strictly increasing, all positive
  // Optional per-source AR(1) correlation for the many scheme (exploratory;
  // 0 keeps the default independent Gaussian increments).
  double source_corr = 0.0;
};

// Throws errc::config_error on any violation. Looser than the analysis-side
// validation in one place: iid lambda == 0 is accepted (degenerate
// no-arrivals runs are a legitimate sanity path), and ar sigma_t may be 0.
SimConfig validate(SimConfig cfg);

struct DecayFit {
  double slope = 0.0;      // fitted decay rate, -d log(p_hat) / d omega
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;     // omega values with p_hat > 0
};

// One supremum-backlog sample per path, in path order. Deterministic for a
// given config: every path owns a generator seeded from (seed, path index),
// so results do not depend on thread count (FORKRATE_THREADS) or scheduling.
std::vector<double> simulate_paths(const SimConfig& cfg);

// p_hat = fraction of samples strictly above omega, with a two-sided 95%
// Wilson score interval. Zero exceedances yield p_hat = 0 and, as a
// documented stand-in, the one-sided 95% upper bound log(20)/n (the "rule of
// three"). horizon is carried through into the record for reporting.
TailEstimate estimate_tail(const std::vector<double>& samples, double omega,
                           std::int64_t horizon = 0);

// Sorts a copy of the samples once and estimates every threshold by binary
// search; output order follows omega_grid.
std::vector<TailEstimate> estimate_tails(const std::vector<double>& samples,
                                         const std::vector<double>& omega_grid,
                                         std::int64_t horizon = 0);

// Least-squares line through (omega, -log p_hat) over estimates with
// p_hat > 0; at least two such points required (errc::insufficient_points).
DecayFit fit_decay_rate(const std::vector<TailEstimate>& estimates);

// CSV / JSON emission of a tail table (simulate contract):
// columns omega,p_hat,ci_half_width,n_paths,horizon,seed; 9 significant
// digits, LF line endings; JSON carries schema_version.
std::string tail_table_csv(const std::vector<TailEstimate>& estimates,
                           std::uint64_t seed);
std::string tail_table_json(const SimConfig& cfg,
                            const std::vector<TailEstimate>& estimates,
                            const std::vector<double>& samples);

// The AR(1) arrival stream a_t = lambda_t + chi_t with stationary
// initialization chi_0 ~ Normal(0, sigma_t^2) and
// chi_t = xi*chi_{t-1} + sqrt(1-xi^2)*sigma_t*eps_t. Exposed so the
// stationarity of the construction is directly testable.
class ArArrivalStream {
 public:
  ArArrivalStream(const ArParams& p, std::uint64_t seed);

  double next();

 private:
  ArParams p_;
  double chi_;
  double innovation_scale_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace forkrate
