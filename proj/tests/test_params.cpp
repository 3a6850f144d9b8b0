#include <cmath>
#include <limits>

#include "doctest.h"
#include "forkrate/errors.hpp"
#include "forkrate/params.hpp"
#include "test_util.hpp"

using namespace forkrate;
using testutil::raises;

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("iid validation accepts positive finite rates only") {
  const IidParams ok = validate(IidParams{1.0, 2.0});
  CHECK(ok.lambda == 1.0);
  CHECK(ok.mu == 2.0);

  CHECK(raises(errc::non_positive_rate, [] { validate(IidParams{0.0, 2.0}); }));
  CHECK(raises(errc::non_positive_rate, [] { validate(IidParams{-1.0, 2.0}); }));
  CHECK(raises(errc::non_positive_rate, [] { validate(IidParams{1.0, 0.0}); }));
  CHECK(raises(errc::non_positive_rate, [] { validate(IidParams{1.0, kInf}); }));
  CHECK(raises(errc::non_positive_rate, [] { validate(IidParams{kNan, 2.0}); }));
}

TEST_CASE("ar validation covers rates, sigma_t and the open xi interval") {
  const ArParams ok = validate(ArParams{10.0, 1.0, -0.2, 12.0});
  CHECK(ok.xi == -0.2);

  // sigma_t = 0 is a valid record (the simulator honors it); analysis
  // operations reject it separately.
  CHECK(validate(ArParams{10.0, 0.0, 0.0, 12.0}).sigma_t == 0.0);

  CHECK(raises(errc::non_positive_rate,
               [] { validate(ArParams{0.0, 1.0, 0.0, 12.0}); }));
  CHECK(raises(errc::non_positive_rate,
               [] { validate(ArParams{10.0, 1.0, 0.0, 0.0}); }));
  CHECK(raises(errc::non_positive_rate,
               [] { validate(ArParams{10.0, -1.0, 0.0, 12.0}); }));
  CHECK(raises(errc::non_positive_rate,
               [] { validate(ArParams{10.0, kNan, 0.0, 12.0}); }));
  CHECK(raises(errc::xi_out_of_range,
               [] { validate(ArParams{10.0, 1.0, 1.0, 12.0}); }));
  CHECK(raises(errc::xi_out_of_range,
               [] { validate(ArParams{10.0, 1.0, -1.0, 12.0}); }));
  CHECK(raises(errc::xi_out_of_range,
               [] { validate(ArParams{10.0, 1.0, kNan, 12.0}); }));
}

TEST_CASE("many validation checks the two rates") {
  CHECK(validate(ManyParams{10.0, 12.0, 50}).n_sources == 50);
  CHECK(raises(errc::non_positive_rate,
               [] { validate(ManyParams{0.0, 12.0, 2}); }));
  CHECK(raises(errc::non_positive_rate,
               [] { validate(ManyParams{10.0, 0.0, 2}); }));
}

TEST_CASE("require_stable demands mu strictly above lambda") {
  CHECK(require_stable(IidParams{1.0, 2.0}).mu == 2.0);
  CHECK(raises(errc::unstable, [] { require_stable(IidParams{2.0, 2.0}); }));
  CHECK(raises(errc::unstable, [] { require_stable(IidParams{3.0, 2.0}); }));
  CHECK(raises(errc::unstable,
               [] { require_stable(ArParams{12.0, 1.0, 0.0, 12.0}); }));
  CHECK(raises(errc::unstable,
               [] { require_stable(ManyParams{12.0, 12.0, 2}); }));
}

TEST_CASE("rate mode names round-trip and reject unknowns") {
  CHECK(rate_mode_from_name("closed_form") == RateMode::closed_form);
  CHECK(rate_mode_from_name("exact_numeric") == RateMode::exact_numeric);
  CHECK(rate_mode_from_name("taylor") == RateMode::taylor);
  CHECK(rate_mode_name(RateMode::taylor) == std::string("taylor"));
  CHECK(raises(errc::config_error, [] { rate_mode_from_name("newton"); }));
}
