#include "forkrate/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forkrate/errors.hpp"
#include "forkrate/threads.hpp"

namespace forkrate {

namespace {

// ===== seeding =====

// splitmix64 finalizer; disperses (seed, path index) into independent
// per-path engine seeds so path results do not depend on scheduling.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t seed, std::int64_t index) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1));
}

// ===== sampling =====

double uniform01(std::mt19937_64& eng) {
  // 53-bit mantissa uniform in [0, 1)
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Inversion by sequential search; exact and cheap for small means. Large
// means go through std::poisson_distribution instead.
long poisson_small(std::mt19937_64& eng, double mean, double exp_neg_mean) {
  const double u = uniform01(eng);
  double p = exp_neg_mean;
  double cum = p;
  long k = 0;
  const long cap = static_cast<long>(mean + 60.0 * std::sqrt(mean) + 20.0);
  while (u > cum && k < cap) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
  }
  return k;
}

constexpr double kSmallMeanLimit = 10.0;

class PoissonSampler {
 public:
  explicit PoissonSampler(double mean) : mean_(mean) {
    if (mean_ > 0.0 && mean_ < kSmallMeanLimit) {
      exp_neg_mean_ = std::exp(-mean_);
    } else if (mean_ >= kSmallMeanLimit) {
      large_ = std::poisson_distribution<long>(mean_);
    }
  }

  long operator()(std::mt19937_64& eng) {
    if (mean_ == 0.0) return 0;
    if (mean_ < kSmallMeanLimit) return poisson_small(eng, mean_, exp_neg_mean_);
    return large_(eng);
  }

 private:
  double mean_;
  double exp_neg_mean_ = 0.0;
  std::poisson_distribution<long> large_;
};

// ===== per-scheme paths =====

double run_iid_path(const IidParams& p, std::int64_t horizon,
                    std::mt19937_64& eng) {
  PoissonSampler arrivals(p.lambda);
  PoissonSampler services(p.mu);
  std::int64_t walk = 0;
  std::int64_t peak = 0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    walk += arrivals(eng) - services(eng);
    if (walk > peak) peak = walk;
  }
  return static_cast<double>(peak);
}

double run_ar_path(const ArParams& p, std::int64_t horizon,
                   std::mt19937_64& eng) {
  std::normal_distribution<double> normal;
  PoissonSampler services(p.mu_t);
  const double innovation = std::sqrt(1.0 - p.xi * p.xi) * p.sigma_t;
  double chi = p.sigma_t * normal(eng);  // stationary start
  double walk = 0.0;
  double peak = 0.0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    chi = p.xi * chi + innovation * normal(eng);
    walk += (p.lambda_t + chi) - static_cast<double>(services(eng));
    if (walk > peak) peak = walk;
  }
  return peak;
}

double run_many_path(const ManyParams& p, double source_corr,
                     std::int64_t horizon, std::mt19937_64& eng) {
  const double n = static_cast<double>(p.n_sources);
  std::normal_distribution<double> normal;
  PoissonSampler services(n * p.mu_bar);
  double walk = 0.0;
  double peak = 0.0;

  if (source_corr == 0.0) {
    // Independent per-source unit-variance Gaussian increments collapse to
    // one aggregate draw per period.
    const double agg_sd = std::sqrt(n);
    for (std::int64_t t = 0; t < horizon; ++t) {
      const double arrivals = n * p.lambda_bar + agg_sd * normal(eng);
      walk += arrivals - static_cast<double>(services(eng));
      if (walk > peak) peak = walk;
    }
    return peak;
  }

  // Exploratory: per-source AR(1) temporal correlation, stationary starts.
  std::vector<double> chi(static_cast<std::size_t>(p.n_sources));
  for (auto& c : chi) c = normal(eng);
  const double innovation = std::sqrt(1.0 - source_corr * source_corr);
  for (std::int64_t t = 0; t < horizon; ++t) {
    double arrivals = 0.0;
    for (auto& c : chi) {
      c = source_corr * c + innovation * normal(eng);
      arrivals += p.lambda_bar + c;
    }
    walk += arrivals - static_cast<double>(services(eng));
    if (walk > peak) peak = walk;
  }
  return peak;
}

std::string format9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::iid: return "iid";
    case Scheme::ar: return "ar";
    case Scheme::many: return "many";
  }
  return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "iid") return Scheme::iid;
  if (name == "ar") return Scheme::ar;
  if (name == "many") return Scheme::many;
  raise(errc::config_error,
        "unknown scheme '" + name + "' (expected iid, ar or many)");
}

SimConfig validate(SimConfig cfg) {
  const auto fail = [](const std::string& what) {
    raise(errc::config_error, what);
  };

  if (cfg.horizon < 1) fail("horizon must be >= 1");
  if (cfg.n_paths < 1) fail("n_paths must be >= 1");
  for (std::size_t i = 0; i < cfg.omega_grid.size(); ++i) {
    if (!(cfg.omega_grid[i] > 0.0) || !std::isfinite(cfg.omega_grid[i])) {
      fail("omega_grid entries must be positive and finite");
    }
    if (i > 0 && !(cfg.omega_grid[i] > cfg.omega_grid[i - 1])) {
      fail("omega_grid must be strictly increasing");
    }
  }

  switch (cfg.scheme) {
    case Scheme::iid: {
      const auto* p = std::get_if<IidParams>(&cfg.params);
      if (!p) fail("scheme iid needs IidParams");
      // lambda == 0 is the degenerate no-arrivals sanity path, legal here
      // even though analysis operations reject it.
      if (!(p->lambda >= 0.0) || !std::isfinite(p->lambda)) {
        fail("lambda must be finite and >= 0");
      }
      if (!(p->mu > 0.0) || !std::isfinite(p->mu)) fail("mu must be > 0");
      break;
    }
    case Scheme::ar: {
      const auto* p = std::get_if<ArParams>(&cfg.params);
      if (!p) fail("scheme ar needs ArParams");
      if (!(p->lambda_t > 0.0) || !std::isfinite(p->lambda_t)) {
        fail("lambda_t must be > 0");
      }
      if (!(p->mu_t > 0.0) || !std::isfinite(p->mu_t)) fail("mu_t must be > 0");
      if (!(p->sigma_t >= 0.0) || !std::isfinite(p->sigma_t)) {
        fail("sigma_t must be >= 0");  // 0 is legal in simulation
      }
      if (!(p->xi > -1.0 && p->xi < 1.0)) fail("xi must lie in (-1, 1)");
      break;
    }
    case Scheme::many: {
      const auto* p = std::get_if<ManyParams>(&cfg.params);
      if (!p) fail("scheme many needs ManyParams");
      if (!(p->lambda_bar > 0.0) || !std::isfinite(p->lambda_bar)) {
        fail("lambda_bar must be > 0");
      }
      if (!(p->mu_bar > 0.0) || !std::isfinite(p->mu_bar)) {
        fail("mu_bar must be > 0");
      }
      if (p->n_sources < 2) fail("n_sources must be >= 2");
      if (!(cfg.source_corr > -1.0 && cfg.source_corr < 1.0)) {
        fail("source_corr must lie in (-1, 1)");
      }
      break;
    }
  }
  if (cfg.scheme != Scheme::many && cfg.source_corr != 0.0) {
    fail("source_corr applies to the many scheme only");
  }
  return cfg;
}

std::vector<double> simulate_paths(const SimConfig& cfg) {
  validate(cfg);
  std::vector<double> samples(static_cast<std::size_t>(cfg.n_paths));
  parallel_for(cfg.n_paths, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      std::mt19937_64 eng(path_seed(cfg.seed, i));
      double q = 0.0;
      switch (cfg.scheme) {
        case Scheme::iid:
          q = run_iid_path(std::get<IidParams>(cfg.params), cfg.horizon, eng);
          break;
        case Scheme::ar:
          q = run_ar_path(std::get<ArParams>(cfg.params), cfg.horizon, eng);
          break;
        case Scheme::many:
          q = run_many_path(std::get<ManyParams>(cfg.params), cfg.source_corr,
                            cfg.horizon, eng);
          break;
      }
      samples[static_cast<std::size_t>(i)] = q;
    }
  });
  return samples;
}

TailEstimate estimate_tail(const std::vector<double>& samples, double omega,
                           std::int64_t horizon) {
  if (samples.empty()) {
    raise(errc::empty_samples, "estimate_tail needs at least one sample");
  }
  std::int64_t count = 0;
  for (const double q : samples) {
    if (q > omega) ++count;
  }

  const double n = static_cast<double>(samples.size());
  TailEstimate e;
  e.omega = omega;
  e.n_paths = static_cast<std::int64_t>(samples.size());
  e.horizon = horizon;
  e.p_hat = static_cast<double>(count) / n;

  if (count == 0) {
    // One-sided 95% upper bound for a zero count ("rule of three"):
    // p <= log(20)/n.
    e.ci_half_width = std::log(20.0) / n;
    return e;
  }

  constexpr double z = 1.959963984540054;  // two-sided 95%
  const double p = e.p_hat;
  const double z2n = z * z / n;
  e.ci_half_width = (z / (1.0 + z2n)) *
                    std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n));
  return e;
}

std::vector<TailEstimate> estimate_tails(const std::vector<double>& samples,
                                         const std::vector<double>& omega_grid,
                                         std::int64_t horizon) {
  if (samples.empty()) {
    raise(errc::empty_samples, "estimate_tails needs at least one sample");
  }
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  std::vector<TailEstimate> out;
  out.reserve(omega_grid.size());
  for (const double omega : omega_grid) {
    const auto first_above =
        std::upper_bound(sorted.begin(), sorted.end(), omega);
    const auto count =
        static_cast<std::int64_t>(std::distance(first_above, sorted.end()));
    TailEstimate e;
    e.omega = omega;
    e.n_paths = static_cast<std::int64_t>(sorted.size());
    e.horizon = horizon;
    e.p_hat = static_cast<double>(count) / n;
    if (count == 0) {
      e.ci_half_width = std::log(20.0) / n;
    } else {
      constexpr double z = 1.959963984540054;
      const double p = e.p_hat;
      const double z2n = z * z / n;
      e.ci_half_width = (z / (1.0 + z2n)) *
                        std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n));
    }
    out.push_back(e);
  }
  return out;
}

DecayFit fit_decay_rate(const std::vector<TailEstimate>& estimates) {
  std::vector<std::pair<double, double>> points;
  for (const auto& e : estimates) {
    if (e.p_hat > 0.0) {
      points.emplace_back(e.omega, -std::log(e.p_hat));
    }
  }
  if (points.size() < 2) {
    std::ostringstream msg;
    msg << "decay fit needs at least 2 thresholds with positive p_hat, got "
        << points.size();
    raise(errc::insufficient_points, msg.str());
  }

  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) {
    raise(errc::insufficient_points, "all fit thresholds coincide");
  }

  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = static_cast<int>(points.size());
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
      const double r = y - (fit.intercept + fit.slope * x);
      ss_res += r * r;
    }
    fit.r_squared = std::max(0.0, 1.0 - ss_res / syy);
  }
  return fit;
}

std::string tail_table_csv(const std::vector<TailEstimate>& estimates,
                           std::uint64_t seed) {
  std::ostringstream out;
  out << "omega,p_hat,ci_half_width,n_paths,horizon,seed\n";
  for (const auto& e : estimates) {
    out << format9(e.omega) << ',' << format9(e.p_hat) << ','
        << format9(e.ci_half_width) << ',' << e.n_paths << ',' << e.horizon
        << ',' << seed << '\n';
  }
  return out.str();
}

std::string tail_table_json(const SimConfig& cfg,
                            const std::vector<TailEstimate>& estimates,
                            const std::vector<double>& samples) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["scheme"] = scheme_name(cfg.scheme);
  doc["n_paths"] = cfg.n_paths;
  doc["horizon"] = cfg.horizon;
  doc["seed"] = cfg.seed;

  double mean = 0.0;
  double peak = 0.0;
  for (const double q : samples) {
    mean += q;
    peak = std::max(peak, q);
  }
  if (!samples.empty()) mean /= static_cast<double>(samples.size());
  doc["summary"] = {{"q_mean", mean}, {"q_max", peak}};

  auto& tails = doc["tails"] = nlohmann::json::array();
  for (const auto& e : estimates) {
    tails.push_back({{"omega", e.omega},
                     {"p_hat", e.p_hat},
                     {"ci_half_width", e.ci_half_width}});
  }
  return doc.dump(2) + "\n";
}

ArArrivalStream::ArArrivalStream(const ArParams& p, std::uint64_t seed)
    : p_(p),
      chi_(0.0),
      innovation_scale_(std::sqrt(1.0 - p.xi * p.xi) * p.sigma_t),
      engine_(mix64(seed)) {
  SimConfig probe;
  probe.scheme = Scheme::ar;
  probe.params = p;
  probe.omega_grid = {1.0};
  validate(probe);  // simulator-grade parameter checks
  chi_ = p_.sigma_t * normal_(engine_);
}

double ArArrivalStream::next() {
  chi_ = p_.xi * chi_ + innovation_scale_ * normal_(engine_);
  return p_.lambda_t + chi_;
}

}  // namespace forkrate
