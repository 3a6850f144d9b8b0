#include "forkrate/params.hpp"

#include <cmath>
#include <sstream>

#include "forkrate/errors.hpp"

namespace forkrate {

namespace {

void check_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be a positive finite rate, got " << value;
    raise(errc::non_positive_rate, msg.str());
  }
}

}  // namespace

const char* rate_mode_name(RateMode mode) {
  switch (mode) {
    case RateMode::closed_form: return "closed_form";
    case RateMode::exact_numeric: return "exact_numeric";
    case RateMode::taylor: return "taylor";
  }
  return "unknown";
}

RateMode rate_mode_from_name(const std::string& name) {
  if (name == "closed_form") return RateMode::closed_form;
  if (name == "exact_numeric") return RateMode::exact_numeric;
  if (name == "taylor") return RateMode::taylor;
  raise(errc::config_error, "unknown rate mode '" + name +
                                "' (expected closed_form, exact_numeric or taylor)");
}

IidParams validate(IidParams p) {
  check_rate(p.lambda, "lambda");
  check_rate(p.mu, "mu");
  return p;
}

ArParams validate(ArParams p) {
  check_rate(p.lambda_t, "lambda_t");
  check_rate(p.mu_t, "mu_t");
  if (!(p.sigma_t >= 0.0) || !std::isfinite(p.sigma_t)) {
    raise(errc::non_positive_rate, "sigma_t must be finite and >= 0");
  }
  if (!(p.xi > -1.0 && p.xi < 1.0)) {
    std::ostringstream msg;
    msg << "xi must lie in the open interval (-1, 1), got " << p.xi;
    raise(errc::xi_out_of_range, msg.str());
  }
  return p;
}

ManyParams validate(ManyParams p) {
  check_rate(p.lambda_bar, "lambda_bar");
  check_rate(p.mu_bar, "mu_bar");
  return p;
}

IidParams require_stable(IidParams p) {
  validate(p);
  if (!(p.mu > p.lambda)) {
    raise(errc::unstable, "rate operations need mu > lambda (stable queue)");
  }
  return p;
}

ArParams require_stable(ArParams p) {
  validate(p);
  if (!(p.mu_t > p.lambda_t)) {
    raise(errc::unstable, "rate operations need mu_t > lambda_t (stable queue)");
  }
  return p;
}

ManyParams require_stable(ManyParams p) {
  validate(p);
  if (!(p.mu_bar > p.lambda_bar)) {
    raise(errc::unstable,
          "rate operations need mu_bar > lambda_bar (stable queue)");
  }
  return p;
}

}  // namespace forkrate
