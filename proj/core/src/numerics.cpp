#include "forkrate/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "forkrate/errors.hpp"

namespace forkrate::numerics {

namespace {

constexpr double kInvPhi = 0.6180339887498949;   // (sqrt(5)-1)/2
constexpr double kInvPhi2 = 0.3819660112501051;  // 1 - kInvPhi
constexpr int kMaxIterations = 1000;
constexpr double kEdgeFraction = 0.01;

void check_bracket(const Bracket& b) {
  if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
    std::ostringstream msg;
    msg << "invalid bracket [" << b.lo << ", " << b.hi << "]";
    raise(errc::domain_error, msg.str());
  }
  if (!(b.tol_rel > 0.0)) {
    raise(errc::domain_error, "bracket tol_rel must be > 0");
  }
}

double checked_eval(const std::function<double(double)>& f, double x,
                    std::int64_t& evaluations) {
  ++evaluations;
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "objective evaluated to " << v << " at x = " << x;
    raise(errc::non_finite, msg.str());
  }
  return v;
}

bool near_edge(double x, double lo, double hi) {
  const double width = hi - lo;
  return (x - lo) <= kEdgeFraction * width || (hi - x) <= kEdgeFraction * width;
}

}  // namespace

MinResult minimize_convex_1d(const std::function<double(double)>& f,
                             const Bracket& bracket) {
  check_bracket(bracket);
  MinResult result;

  double lo = bracket.lo;
  double hi = bracket.hi;
  double x1 = lo + kInvPhi2 * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = checked_eval(f, x1, result.evaluations);
  double f2 = checked_eval(f, x2, result.evaluations);

  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);

  int iterations = 0;
  while (iterations < kMaxIterations &&
         (hi - lo) > bracket.tol_rel * std::max(1.0, std::abs(best_x))) {
    ++iterations;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = lo + kInvPhi2 * (hi - lo);
      f1 = checked_eval(f, x1, result.evaluations);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = checked_eval(f, x2, result.evaluations);
    }
    if (f1 < best_f) {
      best_f = f1;
      best_x = x1;
    }
    if (f2 < best_f) {
      best_f = f2;
      best_x = x2;
    }
  }

  result.argmin = best_x;
  result.min_value = best_f;
  result.converged =
      (hi - lo) <= bracket.tol_rel * std::max(1.0, std::abs(best_x));
  result.at_boundary = near_edge(best_x, bracket.lo, bracket.hi);
  return result;
}

double sup_conjugate(const std::function<double(double)>& cumulant, double x,
                     const Bracket& theta_bracket) {
  check_bracket(theta_bracket);
  const auto negated = [&](double theta) { return cumulant(theta) - theta * x; };

  MinResult r = minimize_convex_1d(negated, theta_bracket);
  if (r.at_boundary) {
    // Widen once about the center, then give up if the supremum still sits
    // on an edge (the transform diverges or needs a larger search interval).
    const double center = 0.5 * (theta_bracket.lo + theta_bracket.hi);
    const double half = theta_bracket.hi - theta_bracket.lo;
    const Bracket wider{center - half, center + half, theta_bracket.tol_rel};
    r = minimize_convex_1d(negated, wider);
    if (r.at_boundary) {
      std::ostringstream msg;
      msg << "supremum escaped the theta bracket at x = " << x
          << " (argmax near " << r.argmin << ")";
      raise(errc::bracket_escape, msg.str());
    }
  }
  return -r.min_value;
}

double solve_bracketed_root(const std::function<double(double)>& g,
                            const Bracket& bracket) {
  check_bracket(bracket);
  double lo = bracket.lo;
  double hi = bracket.hi;
  std::int64_t evaluations = 0;
  double flo = checked_eval(g, lo, evaluations);
  double fhi = checked_eval(g, hi, evaluations);

  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream msg;
    msg << "no sign change over [" << lo << ", " << hi << "]: g(lo) = " << flo
        << ", g(hi) = " << fhi;
    raise(errc::no_sign_change, msg.str());
  }

  // False position with the Illinois modification, guarded by bisection when
  // the interpolated point degenerates.
  int last_side = 0;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < kMaxIterations; ++i) {
    double candidate = (lo * fhi - hi * flo) / (fhi - flo);
    if (!std::isfinite(candidate) || candidate <= lo || candidate >= hi) {
      candidate = 0.5 * (lo + hi);
    }
    const double fc = checked_eval(g, candidate, evaluations);
    if (fc == 0.0) return candidate;
    if ((fc < 0.0) == (flo < 0.0)) {
      lo = candidate;
      flo = fc;
      if (last_side == -1) fhi *= 0.5;
      last_side = -1;
    } else {
      hi = candidate;
      fhi = fc;
      if (last_side == 1) flo *= 0.5;
      last_side = 1;
    }
    mid = candidate;
    if ((hi - lo) <= bracket.tol_rel * std::max(1.0, std::abs(mid))) {
      break;
    }
  }
  return mid;
}

MinResult infimum_over_time(const std::function<double(double)>& conj, double a,
                            const Bracket& t_bracket) {
  check_bracket(t_bracket);
  if (!(a > 0.0)) {
    raise(errc::domain_error, "infimum_over_time needs a > 0");
  }
  if (!(t_bracket.lo > 0.0)) {
    raise(errc::domain_error, "time bracket must be positive");
  }

  MinResult result;
  const auto objective = [&](double t) { return t * conj(a / t); };

  const int n = kTimeGridPoints;
  const double log_lo = std::log(t_bracket.lo);
  const double log_step = (std::log(t_bracket.hi) - log_lo) / (n - 1);
  std::vector<double> grid(n);
  std::vector<double> values(n);
  int best = 0;
  for (int i = 0; i < n; ++i) {
    grid[i] = std::exp(log_lo + i * log_step);
    values[i] = checked_eval(objective, grid[i], result.evaluations);
    if (values[i] < values[best]) best = i;
  }

  // Refine between the grid neighbors of the best point; the objective is
  // assumed unimodal only locally, which the coarse scan has established.
  const Bracket local{grid[std::max(best - 1, 0)],
                      grid[std::min(best + 1, n - 1)], t_bracket.tol_rel};
  MinResult refined = minimize_convex_1d(objective, local);
  result.evaluations += refined.evaluations;

  if (refined.min_value <= values[best]) {
    result.argmin = refined.argmin;
    result.min_value = refined.min_value;
  } else {
    result.argmin = grid[best];
    result.min_value = values[best];
  }

  // Edge proximity in log scale, matching the grid's spacing.
  const double pos = std::log(result.argmin) - log_lo;
  const double span = std::log(t_bracket.hi) - log_lo;
  result.at_boundary = pos <= kEdgeFraction * span || (span - pos) <= kEdgeFraction * span;
  result.converged = refined.converged && !result.at_boundary;
  return result;
}

}  // namespace forkrate::numerics
