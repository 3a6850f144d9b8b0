#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace forkrate {

// All rates are mean block counts per dissemination period.

// Single source, i.i.d. Poisson arrivals and Poisson service.
struct IidParams {
  double lambda = 0.0;  // mean blocks to disseminate per period
  double mu = 0.0;      // mean network transfer capacity per period
};

// Single source, Gaussian AR(1) arrivals centered on lambda_t; service stays
// Poisson with mean mu_t. The analysis formulas normalize sigma_t to 1; the
// simulator honors the field.
struct ArParams {
  double lambda_t = 0.0;
  double sigma_t = 1.0;
  double xi = 0.0;  // AR(1) coefficient, in (-1, 1)
  double mu_t = 0.0;
};

// Many sources, stationary Gaussian aggregate arrivals in per-source scaled
// units. n_sources matters to the simulator only; the rate function is a
// large-N limit.
struct ManyParams {
  double lambda_bar = 0.0;
  double mu_bar = 0.0;
  int n_sources = 2;
};

enum class RateMode { closed_form, exact_numeric, taylor };

const char* rate_mode_name(RateMode mode);
RateMode rate_mode_from_name(const std::string& name);

// Outcome of a rate-function computation I = inf_{t>0} t * conj(a/t).
struct RateResult {
  double value = 0.0;   // rate-function value, >= 0
  double t_star = 0.0;  // minimizing time, > 0
  std::optional<double> y_star;  // inner minimizer (AR / many-source only)
  RateMode mode = RateMode::closed_form;
};

// Empirical tail estimate of P(Q > omega) from Monte Carlo samples.
struct TailEstimate {
  double omega = 0.0;
  double p_hat = 0.0;
  double ci_half_width = 0.0;  // two-sided 95% score interval
  std::int64_t n_paths = 0;
  std::int64_t horizon = 0;
};

// Each validate() returns its argument unchanged when every invariant holds
// and throws Error otherwise (errc::non_positive_rate, errc::xi_out_of_range).
// Stability (mu > lambda) is checked separately because unstable records are
// legal to construct and simulate; only rate/design operations reject them.
IidParams validate(IidParams p);
ArParams validate(ArParams p);
ManyParams validate(ManyParams p);

IidParams require_stable(IidParams p);   // throws errc::unstable
ArParams require_stable(ArParams p);
ManyParams require_stable(ManyParams p);

}  // namespace forkrate
