#include "forkrate/ldp_ar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "forkrate/errors.hpp"
#include "forkrate/numerics.hpp"

namespace forkrate {

namespace {

// Every analysis formula here normalizes sigma_t to 1; a zero sigma would be
// a different (deterministic) arrival model, so it is rejected rather than
// silently treated as the unit-variance one.
void require_analysis_params(const ArParams& p) {
  validate(p);
  if (p.sigma_t == 0.0) {
    raise(errc::domain_error,
          "sigma_t = 0 is not admissible for AR rate analysis (the arrival "
          "cumulant normalizes sigma_t = 1)");
  }
}

double kappa_of(const ArParams& p) { return (1.0 - p.xi) / (1.0 + p.xi); }

// First-order condition of Gamma in y; strictly increasing for y > x.
double stationarity(double y, double x, const ArParams& p) {
  return kappa_of(p) * (y - p.lambda_t) + std::log((y - x) / p.mu_t);
}

constexpr double kRootTol = 1e-12;

QueueConjugate solve_exact(double x, const ArParams& p) {
  const double kappa = kappa_of(p);

  // Offset that undershoots the root: the root obeys
  // y - x = mu_t * exp(-kappa*(y - lambda_t)) and never exceeds
  // max(x, lambda_t) + mu_t, so this lower bound stays below it by at least a
  // factor e. It may still be far below the root (it is only a bound), so
  // whether the minimizer is representably above x is decided by the sign of
  // the stationarity condition there, never by the bound's magnitude.
  const double exponent = -kappa * std::max(0.0, x + p.mu_t - p.lambda_t) - 1.0;
  double lo = x + p.mu_t * std::exp(exponent);
  if (!(lo > x)) {
    lo = std::nextafter(x, std::numeric_limits<double>::infinity());
  }
  if (stationarity(lo, x, p) >= 0.0) {
    // The root sits within one floating step of x; to double precision the
    // infimum is the y -> x+ limit.
    return {conjugate_ar_arrivals(x, p) + p.mu_t, lo};
  }

  double span = std::max(10.0 * (p.lambda_t + p.mu_t), 100.0);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double hi = x + span;
    if (stationarity(hi, x, p) <= 0.0) {
      span *= 2.0;  // still descending at the bound; widen once
      continue;
    }
    const double y_star = numerics::solve_bracketed_root(
        [&](double y) { return stationarity(y, x, p); },
        numerics::Bracket{lo, hi, kRootTol});
    if (y_star - x >= 0.99 * span && attempt == 0) {
      span *= 2.0;  // minimizer suspiciously close to the bound; retry wider
      continue;
    }
    return {gamma_ar(y_star, x, p), y_star};
  }
  std::ostringstream msg;
  msg << "inner minimizer escaped the search bound at x = " << x;
  raise(errc::bracket_escape, msg.str());
}

}  // namespace

double cumulant_ar_arrivals(double theta, const ArParams& p) {
  require_analysis_params(p);
  return theta * p.lambda_t +
         0.5 * theta * theta * (1.0 + p.xi) / (1.0 - p.xi);
}

double conjugate_ar_arrivals(double x, const ArParams& p) {
  require_analysis_params(p);
  const double d = x - p.lambda_t;
  return 0.5 * d * d * (1.0 - p.xi) / (1.0 + p.xi);
}

double gamma_ar(double y, double x, const ArParams& p) {
  require_analysis_params(p);
  if (!(y > x)) {
    std::ostringstream msg;
    msg << "Gamma needs y > x, got y = " << y << ", x = " << x;
    raise(errc::domain_error, msg.str());
  }
  const double z = y - x;
  const double d = y - p.lambda_t;
  return 0.5 * kappa_of(p) * d * d + z * std::log(z / p.mu_t) + p.mu_t - z;
}

TaylorRoots taylor_roots_ar(double x, const ArParams& p) {
  require_analysis_params(p);
  const double xi = p.xi;
  const double xi2 = xi * xi;
  const double l = p.lambda_t;
  const double m = p.mu_t;
  const double radicand = 1.0 + 2.0 * xi + xi2 - 2.0 * l + 2.0 * xi2 * l +
                          4.0 * m - 4.0 * xi2 * m + m * m - 2.0 * xi * m * m +
                          xi2 * m * m + 2.0 * x - 2.0 * xi2 * x;
  if (radicand < 0.0) {
    std::ostringstream msg;
    msg << "Taylor stationarity discriminant is negative (" << radicand
        << ") at x = " << x;
    raise(errc::negative_discriminant, msg.str());
  }
  const double root = std::sqrt(radicand);
  const double base =
      2.0 * m + 2.0 * xi * m + m * m - xi * m * m + x + xi * x;
  return {(base - m * root) / (1.0 + xi), (base + m * root) / (1.0 + xi)};
}

QueueConjugate conjugate_ar_queue(double x, const ArParams& p, RateMode mode) {
  require_analysis_params(p);
  switch (mode) {
    case RateMode::taylor: {
      const TaylorRoots roots = taylor_roots_ar(x, p);
      if (!(roots.y1 > x)) {
        std::ostringstream msg;
        msg << "Taylor minimizer " << roots.y1 << " is not above x = " << x
            << "; the quadratic approximation has no admissible root here";
        raise(errc::domain_error, msg.str());
      }
      return {gamma_ar(roots.y1, x, p), roots.y1};
    }
    case RateMode::exact_numeric:
      return solve_exact(x, p);
    case RateMode::closed_form:
      break;
  }
  raise(errc::domain_error,
        "conjugate_ar_queue supports exact_numeric and taylor modes only");
}

RateResult rate_ar(double b, const ArParams& p, RateMode mode) {
  require_analysis_params(p);
  if (!(b > 0.0)) {
    raise(errc::domain_error, "rate_ar needs b > 0");
  }
  if (!(p.lambda_t > b)) {
    std::ostringstream msg;
    msg << "feasibility needs lambda_t > b, got lambda_t = " << p.lambda_t
        << ", b = " << b;
    raise(errc::infeasible, msg.str());
  }
  require_stable(p);
  if (mode != RateMode::exact_numeric && mode != RateMode::taylor) {
    raise(errc::domain_error, "rate_ar supports exact_numeric and taylor modes only");
  }

  numerics::Bracket t_bracket = numerics::kDefaultTimeBracket;
  if (mode == RateMode::taylor) {
    // The minus-branch root stays above x only while
    // x < lambda_t + 1.5*(1+xi)/(1-xi); keep the induced t range clear of
    // that edge so the Taylor objective is defined on the whole grid.
    const double x_max = p.lambda_t + 1.5 / kappa_of(p);
    t_bracket.lo = std::max(t_bracket.lo, 1.02 * b / x_max);
  }

  const numerics::MinResult m = numerics::infimum_over_time(
      [&](double x) { return conjugate_ar_queue(x, p, mode).value; }, b,
      t_bracket);

  RateResult r;
  r.value = std::max(m.min_value, 0.0);
  r.t_star = m.argmin;
  r.y_star = conjugate_ar_queue(b / m.argmin, p, mode).y_star;
  r.mode = mode;
  return r;
}

}  // namespace forkrate
