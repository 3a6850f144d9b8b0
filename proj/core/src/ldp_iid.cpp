#include "forkrate/ldp_iid.hpp"

#include <cmath>
#include <sstream>

#include "forkrate/errors.hpp"

namespace forkrate {

double cumulant_poisson_arrivals(double theta, double lambda) {
  if (!(lambda > 0.0)) {
    raise(errc::non_positive_rate, "Poisson cumulant needs lambda > 0");
  }
  return lambda * std::expm1(theta);
}

double conjugate_poisson(double x, double rate) {
  if (!(rate > 0.0)) {
    raise(errc::non_positive_rate, "Poisson conjugate needs rate > 0");
  }
  if (x < 0.0) {
    std::ostringstream msg;
    msg << "Poisson conjugate undefined for x < 0, got " << x;
    raise(errc::negative_argument, msg.str());
  }
  if (x == 0.0) return rate;  // x*log(x) -> 0
  return x * std::log(x / rate) + rate - x;
}

double conjugate_queue_increment(double x, const IidParams& p) {
  validate(p);
  const double psi = std::sqrt(x * x + 4.0 * p.lambda * p.mu);
  // x + psi loses precision for large negative x; psi^2 - x^2 = 4*lambda*mu
  // gives the stable rearrangement.
  const double x_plus_psi =
      x >= 0.0 ? x + psi : (4.0 * p.lambda * p.mu) / (psi - x);
  return p.lambda + p.mu - psi + x * std::log(x_plus_psi / (2.0 * p.lambda));
}

RateResult rate_iid(double q, const IidParams& p) {
  require_stable(p);
  if (!(q > 0.0)) {
    raise(errc::domain_error, "rate_iid needs q > 0");
  }
  RateResult r;
  r.value = q * std::log(p.mu / p.lambda);
  r.t_star = q / (p.mu - p.lambda);
  r.mode = RateMode::closed_form;
  return r;
}

double forking_probability_iid(double omega, const IidParams& p) {
  require_stable(p);
  if (omega < 0.0) {
    raise(errc::domain_error, "threshold omega must be >= 0");
  }
  return std::exp(-omega * std::log(p.mu / p.lambda));
}

double effective_omega(double delta, const IidParams& p) {
  require_stable(p);
  if (!(delta > 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << "delta must lie in (0, 1], got " << delta;
    raise(errc::delta_out_of_range, msg.str());
  }
  return -std::log(delta) / std::log(p.mu / p.lambda);
}

double effective_mu(double delta, double lambda, double omega) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << "delta must lie in (0, 1], got " << delta;
    raise(errc::delta_out_of_range, msg.str());
  }
  if (!(lambda > 0.0)) {
    raise(errc::non_positive_rate, "effective_mu needs lambda > 0");
  }
  if (!(omega > 0.0)) {
    raise(errc::domain_error, "effective_mu needs omega > 0");
  }
  return lambda * std::exp(-std::log(delta) / omega);
}

double solve_design(const DesignQuery& query, double lambda) {
  if (query.omega.has_value() == query.mu.has_value()) {
    raise(errc::config_error,
          "design query must fix exactly one of omega or mu");
  }
  if (query.mu.has_value()) {
    return effective_omega(query.delta, IidParams{lambda, *query.mu});
  }
  return effective_mu(query.delta, lambda, *query.omega);
}

}  // namespace forkrate
