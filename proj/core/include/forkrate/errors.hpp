#pragma once

#include <stdexcept>
#include <string>

namespace forkrate {

// Machine-readable failure categories. The CLI maps these to exit codes and
// JSON error objects; library users can switch on code() instead of parsing
// messages.
enum class errc {
  non_positive_rate,
  xi_out_of_range,
  unstable,
  infeasible,
  delta_out_of_range,
  negative_argument,
  domain_error,
  negative_discriminant,
  non_finite,
  no_sign_change,
  bracket_escape,
  empty_samples,
  insufficient_points,
  config_error,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] void raise(errc code, const std::string& what);

}  // namespace forkrate
