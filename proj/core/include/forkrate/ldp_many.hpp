#pragma once

#include "forkrate/ldp_ar.hpp"
#include "forkrate/params.hpp"

namespace forkrate {

// Many-source scheme: N sources whose aggregate arrivals form a stationary
// Gaussian process, analyzed in per-source scaled units. The scaled cumulant
// comes out Gaussian with unit quadratic coefficient (the scaling sequence
// v_t = t^2/varsigma(t) fixes c = 1), so the model-class conditions hold by
// construction: the per-period log-MGF is finite near the origin, the scaled
// N-limit exists and is differentiable with steep growth, the time limit
// exists, and the scaling-function approximation is uniform. None of that is
// runtime-checked; it constrains the model class, not individual inputs.
//
// Formulas mirror the AR scheme at xi = 0 (their algebra coincides there),
// but are implemented independently so the identity stays a genuine
// cross-check.

// theta*lambda_bar + theta^2/2
double cumulant_many_arrivals(double theta, const ManyParams& p);

// (x - lambda_bar)^2 / 2
double conjugate_many_arrivals(double x, const ManyParams& p);

// Gamma_bar(y) = (y-lambda_bar)^2/2 + (y-x) log((y-x)/mu_bar) + mu_bar - (y-x)
// Requires y > x; the y -> x+ limit is (x-lambda_bar)^2/2 + mu_bar.
double gamma_many(double y, double x, const ManyParams& p);

// Roots of the Taylor-expanded stationarity condition:
//   y_{1,2} = 2*mu_bar + mu_bar^2 + x -/+ mu_bar * w,
//   w = sqrt(1 - 2*lambda_bar + 4*mu_bar + mu_bar^2 + 2*x)
TaylorRoots taylor_roots_many(double x, const ManyParams& p);

// inf_{y > x} Gamma_bar(y); exact mode solves (y - lambda_bar) +
// log((y-x)/mu_bar) = 0, taylor mode evaluates at the minus-branch root.
QueueConjugate conjugate_many_queue(double x, const ManyParams& p,
                                    RateMode mode = RateMode::exact_numeric);

// I(u) = inf_{t>0} t * conjugate_many_queue(u/t). Requires u > 0,
// lambda_bar > u and mu_bar > lambda_bar.
RateResult rate_many(double u, const ManyParams& p,
                     RateMode mode = RateMode::exact_numeric);

}  // namespace forkrate
