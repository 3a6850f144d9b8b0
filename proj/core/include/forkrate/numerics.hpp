#pragma once

#include <cstdint>
#include <functional>

namespace forkrate::numerics {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double tol_rel = 1e-9;  // relative width tolerance
};

struct MinResult {
  double argmin = 0.0;
  double min_value = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
  // argmin landed within 1% of a bracket edge; the true minimum may lie
  // outside the search interval.
  bool at_boundary = false;
};

// Default tolerances: 1e-9 for minimization, 1e-8 for root finding. Downstream
// acceptance tolerances are >= 1e-6, so these leave an order of magnitude of
// headroom.
inline constexpr double kMinimizeTolRel = 1e-9;
inline constexpr double kRootTolRel = 1e-8;

// theta search interval for the numerical Legendre transform; widened once
// (doubled about its center) if the supremum lands on an edge.
inline constexpr Bracket kDefaultThetaBracket{-50.0, 50.0, kMinimizeTolRel};

// t search interval for the infimum over time, covering the simulation scale
// (horizon 2000) with margin on both sides.
inline constexpr Bracket kDefaultTimeBracket{1e-3, 4000.0, 1e-8};
inline constexpr int kTimeGridPoints = 200;

// Golden-section contraction of a unimodal f on the bracket. Unimodality is
// the caller's responsibility. Deterministic; throws errc::non_finite if f
// evaluates to NaN or infinity inside the bracket.
MinResult minimize_convex_1d(const std::function<double(double)>& f,
                             const Bracket& bracket);

// Numerical Legendre-Fenchel transform sup_theta {theta*x - cumulant(theta)},
// via minimize_convex_1d on the negation. Cross-check oracle for the closed
// forms; throws errc::bracket_escape when the supremum sits at a bracket edge
// even after one widening.
double sup_conjugate(const std::function<double(double)>& cumulant, double x,
                     const Bracket& theta_bracket = kDefaultThetaBracket);

// Bisection with false-position interpolation (Illinois). Requires a sign
// change over the bracket (errc::no_sign_change otherwise); contracts to
// tol_rel * max(1, |root|).
double solve_bracketed_root(const std::function<double(double)>& g,
                            const Bracket& bracket);

// Minimizes h(t) = t * conj(a/t) over a log-spaced grid of kTimeGridPoints
// points followed by golden-section refinement between the grid neighbors of
// the best point. Boundary minima (within 1% of either edge, log scale) are
// reported via at_boundary with converged=false, not errored: the infimum may
// be approached at an edge for parameters the callers exclude.
MinResult infimum_over_time(const std::function<double(double)>& conj, double a,
                            const Bracket& t_bracket = kDefaultTimeBracket);

}  // namespace forkrate::numerics
