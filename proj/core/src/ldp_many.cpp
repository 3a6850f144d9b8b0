#include "forkrate/ldp_many.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "forkrate/errors.hpp"
#include "forkrate/numerics.hpp"

namespace forkrate {

namespace {

// First-order condition of Gamma_bar in y; strictly increasing for y > x.
double stationarity(double y, double x, const ManyParams& p) {
  return (y - p.lambda_bar) + std::log((y - x) / p.mu_bar);
}

constexpr double kRootTol = 1e-12;

QueueConjugate solve_exact(double x, const ManyParams& p) {
  // Lower bound on the root offset (see the ar module for the derivation);
  // the limit case is decided by the condition's sign at that point, not by
  // the bound's magnitude, because the bound can be much smaller than the
  // root it undershoots.
  const double exponent =
      -std::max(0.0, x + p.mu_bar - p.lambda_bar) - 1.0;
  double lo = x + p.mu_bar * std::exp(exponent);
  if (!(lo > x)) {
    lo = std::nextafter(x, std::numeric_limits<double>::infinity());
  }
  if (stationarity(lo, x, p) >= 0.0) {
    return {conjugate_many_arrivals(x, p) + p.mu_bar, lo};
  }

  double span = std::max(10.0 * (p.lambda_bar + p.mu_bar), 100.0);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double hi = x + span;
    if (stationarity(hi, x, p) <= 0.0) {
      span *= 2.0;
      continue;
    }
    const double y_star = numerics::solve_bracketed_root(
        [&](double y) { return stationarity(y, x, p); },
        numerics::Bracket{lo, hi, kRootTol});
    if (y_star - x >= 0.99 * span && attempt == 0) {
      span *= 2.0;
      continue;
    }
    return {gamma_many(y_star, x, p), y_star};
  }
  std::ostringstream msg;
  msg << "inner minimizer escaped the search bound at x = " << x;
  raise(errc::bracket_escape, msg.str());
}

}  // namespace

double cumulant_many_arrivals(double theta, const ManyParams& p) {
  validate(p);
  return theta * p.lambda_bar + 0.5 * theta * theta;
}

double conjugate_many_arrivals(double x, const ManyParams& p) {
  validate(p);
  const double d = x - p.lambda_bar;
  return 0.5 * d * d;
}

double gamma_many(double y, double x, const ManyParams& p) {
  validate(p);
  if (!(y > x)) {
    std::ostringstream msg;
    msg << "Gamma needs y > x, got y = " << y << ", x = " << x;
    raise(errc::domain_error, msg.str());
  }
  const double z = y - x;
  const double d = y - p.lambda_bar;
  return 0.5 * d * d + z * std::log(z / p.mu_bar) + p.mu_bar - z;
}

TaylorRoots taylor_roots_many(double x, const ManyParams& p) {
  validate(p);
  const double m = p.mu_bar;
  const double radicand =
      1.0 - 2.0 * p.lambda_bar + 4.0 * m + m * m + 2.0 * x;
  if (radicand < 0.0) {
    std::ostringstream msg;
    msg << "Taylor stationarity discriminant is negative (" << radicand
        << ") at x = " << x;
    raise(errc::negative_discriminant, msg.str());
  }
  const double root = std::sqrt(radicand);
  const double base = 2.0 * m + m * m + x;
  return {base - m * root, base + m * root};
}

QueueConjugate conjugate_many_queue(double x, const ManyParams& p,
                                    RateMode mode) {
  validate(p);
  switch (mode) {
    case RateMode::taylor: {
      const TaylorRoots roots = taylor_roots_many(x, p);
      if (!(roots.y1 > x)) {
        std::ostringstream msg;
        msg << "Taylor minimizer " << roots.y1 << " is not above x = " << x
            << "; the quadratic approximation has no admissible root here";
        raise(errc::domain_error, msg.str());
      }
      return {gamma_many(roots.y1, x, p), roots.y1};
    }
    case RateMode::exact_numeric:
      return solve_exact(x, p);
    case RateMode::closed_form:
      break;
  }
  raise(errc::domain_error,
        "conjugate_many_queue supports exact_numeric and taylor modes only");
}

RateResult rate_many(double u, const ManyParams& p, RateMode mode) {
  validate(p);
  if (!(u > 0.0)) {
    raise(errc::domain_error, "rate_many needs u > 0");
  }
  if (!(p.lambda_bar > u)) {
    std::ostringstream msg;
    msg << "feasibility needs lambda_bar > u, got lambda_bar = "
        << p.lambda_bar << ", u = " << u;
    raise(errc::infeasible, msg.str());
  }
  require_stable(p);
  if (mode != RateMode::exact_numeric && mode != RateMode::taylor) {
    raise(errc::domain_error,
          "rate_many supports exact_numeric and taylor modes only");
  }

  numerics::Bracket t_bracket = numerics::kDefaultTimeBracket;
  if (mode == RateMode::taylor) {
    // Admissible region of the minus-branch root: x < lambda_bar + 1.5.
    const double x_max = p.lambda_bar + 1.5;
    t_bracket.lo = std::max(t_bracket.lo, 1.02 * u / x_max);
  }

  const numerics::MinResult m = numerics::infimum_over_time(
      [&](double x) { return conjugate_many_queue(x, p, mode).value; }, u,
      t_bracket);

  RateResult r;
  r.value = std::max(m.min_value, 0.0);
  r.t_star = m.argmin;
  r.y_star = conjugate_many_queue(u / m.argmin, p, mode).y_star;
  r.mode = mode;
  return r;
}

}  // namespace forkrate
