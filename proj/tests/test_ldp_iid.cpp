#include <cmath>
#include <vector>

#include "doctest.h"
#include "forkrate/errors.hpp"
#include "forkrate/ldp_iid.hpp"
#include "forkrate/numerics.hpp"
#include "test_util.hpp"

using namespace forkrate;
using testutil::raises;
using testutil::rel_err;

TEST_CASE("Poisson cumulant evaluates lambda*(e^theta - 1)") {
  CHECK(cumulant_poisson_arrivals(0.0, 1.0) == 0.0);
  CHECK(std::fabs(cumulant_poisson_arrivals(std::log(2.0), 1.0) - 1.0) <=
        1e-15);
  CHECK(rel_err(cumulant_poisson_arrivals(1.0, 2.0),
                2.0 * (std::exp(1.0) - 1.0)) <= 1e-15);
  CHECK(raises(errc::non_positive_rate,
               [] { cumulant_poisson_arrivals(1.0, 0.0); }));
}

TEST_CASE("Poisson conjugate pins its closed form and the x = 0 limit") {
  CHECK(conjugate_poisson(0.0, 1.5) == 1.5);
  CHECK(std::fabs(conjugate_poisson(2.0, 1.0) -
                  (2.0 * std::log(2.0) - 1.0)) <= 1e-15);
  CHECK(conjugate_poisson(3.0, 3.0) == 0.0);
  CHECK(raises(errc::negative_argument, [] { conjugate_poisson(-0.1, 1.0); }));
  CHECK(raises(errc::non_positive_rate, [] { conjugate_poisson(1.0, 0.0); }));

  // Nonnegative everywhere, zero only at the mean.
  for (double x = 0.0; x <= 8.0; x += 0.25) {
    const double v = conjugate_poisson(x, 2.0);
    CHECK(v >= 0.0);
    if (x != 2.0) CHECK(v > 0.0);
  }
}

TEST_CASE("queue-increment conjugate pins its examples and its zero") {
  const IidParams p{1.0, 2.0};
  const double sqrt2 = std::sqrt(2.0);
  CHECK(std::fabs(conjugate_queue_increment(0.0, p) -
                  (sqrt2 - 1.0) * (sqrt2 - 1.0)) <= 1e-14);
  CHECK(std::fabs(conjugate_queue_increment(1.0, p) - std::log(2.0)) <= 1e-14);
  CHECK(std::fabs(conjugate_queue_increment(-1.0, p)) <= 1e-14);

  const IidParams q{3.0, 7.0};
  CHECK(std::fabs(conjugate_queue_increment(3.0 - 7.0, q)) <= 1e-12);
}

TEST_CASE("queue-increment conjugate agrees with its numerical transform") {
  const IidParams p{1.0, 2.0};
  const auto cumulant = [&](double theta) {
    return cumulant_poisson_arrivals(theta, p.lambda) +
           cumulant_poisson_arrivals(-theta, p.mu);
  };
  for (int i = 0; i <= 20; ++i) {
    const double x = (p.lambda - p.mu) + 5.0 * i / 20.0;
    const double closed = conjugate_queue_increment(x, p);
    const double numeric = numerics::sup_conjugate(cumulant, x);
    CHECK(std::fabs(closed - numeric) <= 1e-6);
  }
}

TEST_CASE("queue-increment conjugate is convex and stable for large |x|") {
  const IidParams p{1.0, 2.0};
  for (double x = -3.0; x <= 6.0; x += 0.5) {
    const double h = 0.25;
    const double mid = 2.0 * conjugate_queue_increment(x, p);
    const double ends = conjugate_queue_increment(x - h, p) +
                        conjugate_queue_increment(x + h, p);
    CHECK(mid <= ends + 1e-12);
  }

  // Large negative x exercises the cancellation-free rearrangement; the long
  // double long form is accurate enough there to serve as the reference.
  for (double x : {-1e3, -1e6}) {
    const long double lx = x;
    const long double psi =
        std::sqrt(lx * lx + 4.0L * p.lambda * p.mu);
    const long double want =
        p.lambda + p.mu - psi + lx * std::log((lx + psi) / (2.0L * p.lambda));
    CHECK(rel_err(conjugate_queue_increment(x, p),
                  static_cast<double>(want)) <= 1e-6);
  }
}

TEST_CASE("iid rate is q*log(mu/lambda) with t* = q/(mu - lambda)") {
  const RateResult r = rate_iid(5.0, IidParams{1.0, 2.0});
  CHECK(rel_err(r.value, 5.0 * std::log(2.0)) <= 1e-15);
  CHECK(rel_err(r.t_star, 5.0) <= 1e-15);
  CHECK(r.mode == RateMode::closed_form);
  CHECK(!r.y_star.has_value());

  const double e = std::exp(1.0);
  const RateResult s = rate_iid(3.0, IidParams{2.0, 2.0 * e});
  CHECK(rel_err(s.value, 3.0) <= 1e-15);
  CHECK(rel_err(s.t_star, 3.0 / (2.0 * e - 2.0)) <= 1e-15);

  // Linear in q.
  const RateResult a = rate_iid(2.0, IidParams{1.0, 2.0});
  const RateResult b = rate_iid(4.0, IidParams{1.0, 2.0});
  CHECK(rel_err(b.value, 2.0 * a.value) <= 1e-12);

  CHECK(raises(errc::domain_error, [] { rate_iid(0.0, IidParams{1.0, 2.0}); }));
  CHECK(raises(errc::domain_error, [] { rate_iid(-1.0, IidParams{1.0, 2.0}); }));
  CHECK(raises(errc::unstable, [] { rate_iid(1.0, IidParams{2.0, 2.0}); }));
}

TEST_CASE("forking probability decays geometrically in the threshold") {
  const IidParams p{1.0, 2.0};
  CHECK(std::fabs(forking_probability_iid(1.0, p) - 0.5) <= 1e-15);
  CHECK(rel_err(forking_probability_iid(10.0, p), std::pow(2.0, -10.0)) <=
        1e-14);
  CHECK(forking_probability_iid(0.0, p) == 1.0);
  CHECK(forking_probability_iid(1e-12, p) ==
        doctest::Approx(1.0).epsilon(1e-11));

  double prev = 1.0;
  for (double omega = 0.5; omega <= 6.0; omega += 0.5) {
    const double cur = forking_probability_iid(omega, p);
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK(raises(errc::domain_error, [&] { forking_probability_iid(-1.0, p); }));
  CHECK(raises(errc::unstable,
               [] { forking_probability_iid(1.0, IidParams{2.0, 1.0}); }));
}

TEST_CASE("threshold design pins its examples and rejects bad delta") {
  const double e = std::exp(1.0);
  CHECK(rel_err(effective_omega(std::exp(-3.0), IidParams{1.0, e}), 3.0) <=
        1e-14);
  CHECK(rel_err(effective_omega(0.01, IidParams{1.0, 2.0}),
                std::log(100.0) / std::log(2.0)) <= 1e-14);
  CHECK(effective_omega(1.0, IidParams{1.0, 2.0}) == 0.0);

  CHECK(raises(errc::delta_out_of_range,
               [] { effective_omega(0.0, IidParams{1.0, 2.0}); }));
  CHECK(raises(errc::delta_out_of_range,
               [] { effective_omega(1.5, IidParams{1.0, 2.0}); }));
  CHECK(raises(errc::unstable,
               [] { effective_omega(0.5, IidParams{2.0, 1.0}); }));
}

TEST_CASE("service design pins its examples and preconditions") {
  const double e = std::exp(1.0);
  CHECK(rel_err(effective_mu(std::exp(-3.0), 1.0, 3.0), e) <= 1e-14);
  CHECK(effective_mu(1.0, 2.5, 4.0) == 2.5);

  CHECK(raises(errc::domain_error, [] { effective_mu(0.5, 1.0, 0.0); }));
  CHECK(raises(errc::non_positive_rate, [] { effective_mu(0.5, 0.0, 1.0); }));
  CHECK(raises(errc::delta_out_of_range, [] { effective_mu(0.0, 1.0, 1.0); }));
}

TEST_CASE("design maps invert each other across the delta range") {
  for (const IidParams p : {IidParams{1.0, 2.0}, IidParams{2.0, 3.0}}) {
    for (double delta : {0.5, 0.1, 0.01, 1e-4}) {
      const double omega = effective_omega(delta, p);
      CHECK(rel_err(forking_probability_iid(omega, p), delta) <= 1e-12);
      CHECK(rel_err(effective_mu(delta, p.lambda, omega), p.mu) <= 1e-12);
    }
  }
}

TEST_CASE("design query solves for exactly one unknown") {
  DesignQuery by_mu;
  by_mu.delta = 0.01;
  by_mu.mu = 2.0;
  CHECK(rel_err(solve_design(by_mu, 1.0),
                std::log(100.0) / std::log(2.0)) <= 1e-14);

  DesignQuery by_omega;
  by_omega.delta = std::exp(-3.0);
  by_omega.omega = 3.0;
  CHECK(rel_err(solve_design(by_omega, 1.0), std::exp(1.0)) <= 1e-14);

  CHECK(raises(errc::config_error, [] {
    DesignQuery both;
    both.omega = 1.0;
    both.mu = 2.0;
    solve_design(both, 1.0);
  }));
  CHECK(raises(errc::config_error, [] { solve_design(DesignQuery{}, 1.0); }));
}
