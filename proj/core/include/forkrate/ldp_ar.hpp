#pragma once

#include "forkrate/params.hpp"

namespace forkrate {

// Single-source scheme with AR(1) Gaussian arrivals. The arrival cumulant
// normalizes sigma_t to 1, so every operation in this header rejects
// sigma_t = 0; service stays Poisson with mean mu_t. The decay statement is
// P(backlog > r*b) ~ exp(-r * I(b)) as r grows (decay interpretation).

struct QueueConjugate {
  double value = 0.0;
  double y_star = 0.0;  // inner minimizer, strictly above x
};

struct TaylorRoots {
  double y1 = 0.0;  // minus branch; the admissible minimizer
  double y2 = 0.0;  // plus branch
};

// theta*lambda_t + (theta^2/2) * (1+xi)/(1-xi)
double cumulant_ar_arrivals(double theta, const ArParams& p);

// (x - lambda_t)^2 * (1-xi) / (2*(1+xi)); zero at the mean, symmetric.
double conjugate_ar_arrivals(double x, const ArParams& p);

// Inner objective whose infimum over y gives the queue-increment conjugate:
//   Gamma(y) = (y-lambda_t)^2 (1-xi)/(2(1+xi))
//            + (y-x) log((y-x)/mu_t) + mu_t - (y-x)
// Strictly convex for y > x; requires y > x (errc::domain_error otherwise).
// The y -> x+ limit is conjugate_ar_arrivals(x) + mu_t.
double gamma_ar(double y, double x, const ArParams& p);

// Closed-form roots of the stationarity condition after a second-order Taylor
// expansion of the log term about (y-x)/mu_t = 1. Throws
// errc::negative_discriminant when the radicand is negative (reported, never
// clamped).
TaylorRoots taylor_roots_ar(double x, const ArParams& p);

// Queue-increment conjugate inf_{y > x} Gamma(y).
//  - exact_numeric: solves the strictly increasing first-order condition
//    (1-xi)/(1+xi) * (y-lambda_t) + log((y-x)/mu_t) = 0 by bracketed root
//    finding over (x, x + Y_MAX], Y_MAX = max(10*(lambda_t+mu_t), 100), with
//    one doubling retry if the minimizer lands within 1% of the bound.
//  - taylor: evaluates Gamma at the minus-branch Taylor root (the plus branch
//    cannot produce the infimum); errc::domain_error if that root is not
//    above x.
QueueConjugate conjugate_ar_queue(double x, const ArParams& p,
                                  RateMode mode = RateMode::exact_numeric);

// I(b) = inf_{t>0} t * conjugate_ar_queue(b/t). Requires b > 0,
// lambda_t > b (feasibility of the scaled threshold) and mu_t > lambda_t.
RateResult rate_ar(double b, const ArParams& p,
                   RateMode mode = RateMode::exact_numeric);

}  // namespace forkrate
