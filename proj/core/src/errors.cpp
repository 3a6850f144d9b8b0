#include "forkrate/errors.hpp"

namespace forkrate {

const char* errc_name(errc code) {
  switch (code) {
    case errc::non_positive_rate: return "non_positive_rate";
    case errc::xi_out_of_range: return "xi_out_of_range";
    case errc::unstable: return "unstable";
    case errc::infeasible: return "infeasible";
    case errc::delta_out_of_range: return "delta_out_of_range";
    case errc::negative_argument: return "negative_argument";
    case errc::domain_error: return "domain_error";
    case errc::negative_discriminant: return "negative_discriminant";
    case errc::non_finite: return "non_finite";
    case errc::no_sign_change: return "no_sign_change";
    case errc::bracket_escape: return "bracket_escape";
    case errc::empty_samples: return "empty_samples";
    case errc::insufficient_points: return "insufficient_points";
    case errc::config_error: return "config_error";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace forkrate
