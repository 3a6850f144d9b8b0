#pragma once

#include <optional>

#include "forkrate/params.hpp"

namespace forkrate {

// Single-source i.i.d. scheme. Everything here is closed form: the backlog
// Q_t is a random walk with increment a_t - b_t, a_t ~ Poisson(lambda),
// b_t ~ Poisson(mu), and Q = sup_t Q_t obeys a large-deviation decay with
// rate I(q) = q * log(mu/lambda). Logs are natural throughout.

// lambda * (e^theta - 1)
double cumulant_poisson_arrivals(double theta, double lambda);

// Convex conjugate of the Poisson cumulant: x*log(x/rate) + rate - x, with
// the x=0 limit equal to rate. x must be >= 0.
double conjugate_poisson(double x, double rate);

// Conjugate of the per-period queue increment a - b:
//   psi = sqrt(x^2 + 4*lambda*mu)
//   lambda + mu - psi + x * log((x + psi) / (2*lambda))
// Nonnegative, zero exactly at the mean drift x = lambda - mu.
double conjugate_queue_increment(double x, const IidParams& p);

// I(q) = q * log(mu/lambda) with minimizing time t* = q / (mu - lambda).
// Requires q > 0 and a stable (mu > lambda) parameter set.
RateResult rate_iid(double q, const IidParams& p);

// LDP approximation of the forking probability, P(Q > omega) ~ (lambda/mu)^omega.
// This drops sub-exponential prefactors; it is an asymptotic decay estimate,
// not an exact probability. omega = 0 returns the trivial bound 1.
double forking_probability_iid(double omega, const IidParams& p);

// Smallest threshold keeping the LDP forking estimate at or below delta:
// omega*(delta) = -log(delta) / log(mu/lambda). delta in (0, 1].
double effective_omega(double delta, const IidParams& p);

// Smallest service rate keeping the LDP forking estimate at or below delta at
// a fixed threshold: mu*(delta) = lambda * e^{-log(delta)/omega}.
double effective_mu(double delta, double lambda, double omega);

// A design question: given delta, solve for the quantity that is not fixed.
// Exactly one of omega / mu must be set.
struct DesignQuery {
  double delta = 1.0;
  std::optional<double> omega;  // fixed threshold -> solve for mu
  std::optional<double> mu;     // fixed service rate -> solve for omega
};

double solve_design(const DesignQuery& query, double lambda);

}  // namespace forkrate
