#include <cmath>
#include <limits>

#include "doctest.h"
#include "forkrate/errors.hpp"
#include "forkrate/ldp_ar.hpp"
#include "forkrate/ldp_many.hpp"
#include "test_util.hpp"

using namespace forkrate;
using testutil::raises;
using testutil::rel_err;

namespace {

double foc(double y, double x, const ManyParams& p) {
  return (y - p.lambda_bar) + std::log((y - x) / p.mu_bar);
}

double foc_taylor(double y, double x, const ManyParams& p) {
  const double w = (y - x) / p.mu_bar;
  return (y - p.lambda_bar) + (w - 1.0) - 0.5 * (w - 1.0) * (w - 1.0);
}

}  // namespace

TEST_CASE("many-source cumulant is the unit-variance Gaussian form") {
  const ManyParams p{3.0, 1.0, 2};
  CHECK(cumulant_many_arrivals(0.0, p) == 0.0);
  CHECK(rel_err(cumulant_many_arrivals(2.0, p), 8.0) <= 1e-15);
  CHECK(raises(errc::non_positive_rate, [] {
    cumulant_many_arrivals(1.0, ManyParams{0.0, 1.0, 2});
  }));
}

TEST_CASE("many-source conjugate is symmetric squared distance over two") {
  const ManyParams p{3.0, 1.0, 2};
  CHECK(conjugate_many_arrivals(3.0, p) == 0.0);
  CHECK(rel_err(conjugate_many_arrivals(6.0, p), 4.5) <= 1e-15);
  CHECK(rel_err(conjugate_many_arrivals(0.0, p), 4.5) <= 1e-15);
}

TEST_CASE("many-source inner objective pins probes and the x+ limit") {
  const ManyParams p{10.0, 12.0, 2};
  CHECK(rel_err(gamma_many(10.0 + 12.0, 10.0, p), 72.0) <= 1e-14);

  const double limit = conjugate_many_arrivals(5.0, p) + p.mu_bar;
  CHECK(std::fabs(gamma_many(5.0 + 1e-12, 5.0, p) - limit) <= 1e-9);

  CHECK(raises(errc::domain_error, [&] { gamma_many(5.0, 5.0, p); }));
  CHECK(raises(errc::domain_error, [&] { gamma_many(4.0, 5.0, p); }));

  for (double y = 3.0; y <= 40.0; y += 1.0) {
    const double h = 0.5;
    CHECK(2.0 * gamma_many(y, 2.0, p) <=
          gamma_many(y - h, 2.0, p) + gamma_many(y + h, 2.0, p) + 1e-12);
  }
}

TEST_CASE("many-source taylor roots pin the worked radicand") {
  const ManyParams p{10.0, 12.0, 2};
  const TaylorRoots r = taylor_roots_many(5.0, p);
  const double disc = 12.0 * std::sqrt(183.0);
  CHECK(rel_err(r.y1, 173.0 - disc) <= 1e-12);
  CHECK(rel_err(r.y2, 173.0 + disc) <= 1e-12);
  CHECK(std::fabs(foc_taylor(r.y1, 5.0, p)) <= 1e-9);
  CHECK(std::fabs(foc_taylor(r.y2, 5.0, p)) <= 1e-9);

  CHECK(raises(errc::negative_discriminant, [] {
    taylor_roots_many(1.0, ManyParams{100.0, 1.0, 2});
  }));
}

TEST_CASE("many-source queue conjugate matches a dense scan") {
  const ManyParams p{10.0, 12.0, 2};
  const double x = 2.0;
  const QueueConjugate qc = conjugate_many_queue(x, p);

  double best = std::numeric_limits<double>::infinity();
  double best_y = x;
  for (double y = x + 1e-4; y <= 200.0; y += 1e-4) {
    const double g = gamma_many(y, x, p);
    if (g < best) {
      best = g;
      best_y = y;
    }
  }
  CHECK(std::fabs(qc.value - best) <= 1e-6);
  CHECK(std::fabs(qc.y_star - best_y) <= 1e-3);
  CHECK(std::fabs(foc(qc.y_star, x, p)) <= 1e-8);

  const QueueConjugate taylor = conjugate_many_queue(x, p, RateMode::taylor);
  CHECK(taylor.value >= qc.value - 1e-12);
  CHECK(raises(errc::domain_error,
               [&] { conjugate_many_queue(x, p, RateMode::closed_form); }));
}

TEST_CASE("every many-source formula coincides with ar at xi = 0") {
  const ManyParams many{10.0, 12.0, 2};
  const ArParams ar{10.0, 1.0, 0.0, 12.0};

  for (double theta = -2.0; theta <= 2.0; theta += 0.25) {
    CHECK(std::fabs(cumulant_many_arrivals(theta, many) -
                    cumulant_ar_arrivals(theta, ar)) <= 1e-9);
  }
  for (double x = 4.0; x <= 16.0; x += 1.0) {
    CHECK(std::fabs(conjugate_many_arrivals(x, many) -
                    conjugate_ar_arrivals(x, ar)) <= 1e-9);
    CHECK(std::fabs(gamma_many(x + 3.0, x, many) -
                    gamma_ar(x + 3.0, x, ar)) <= 1e-9);
  }

  const TaylorRoots tm = taylor_roots_many(5.0, many);
  const TaylorRoots ta = taylor_roots_ar(5.0, ar);
  CHECK(std::fabs(tm.y1 - ta.y1) <= 1e-9);
  CHECK(std::fabs(tm.y2 - ta.y2) <= 1e-9);

  const QueueConjugate qm = conjugate_many_queue(2.0, many);
  const QueueConjugate qa = conjugate_ar_queue(2.0, ar);
  CHECK(std::fabs(qm.value - qa.value) <= 1e-9);
  CHECK(std::fabs(qm.y_star - qa.y_star) <= 1e-6);
}

TEST_CASE("exact solve survives a microscopic bracket bound") {
  // mu_bar >> lambda_bar drives the analytic lower bound on y* - x below
  // 1e-17 while the true minimizer is far from x; the sign test at the bound
  // point must keep the solver on the root-finding path.
  const ManyParams p{10.0, 50.0, 2};
  const double x = 2.0;
  const QueueConjugate qc = conjugate_many_queue(x, p, RateMode::exact_numeric);
  CHECK(std::fabs(foc(qc.y_star, x, p)) <= 1e-8);
  CHECK(qc.y_star > 10.0);
  CHECK(qc.value < conjugate_many_arrivals(x, p) + p.mu_bar - 1.0);

  double best = std::numeric_limits<double>::infinity();
  for (double y = x + 1e-3; y <= 70.0; y += 1e-3) {
    best = std::min(best, gamma_many(y, x, p));
  }
  CHECK(std::fabs(qc.value - best) <= 1e-5);
}

TEST_CASE("many-source rate reproduces its frozen baselines") {
  const RateResult r = rate_many(5.0, ManyParams{10.0, 12.0, 2});
  CHECK(rel_err(r.value, 1.70265400885) <= 1e-6);
  CHECK(rel_err(r.t_star, 2.77189601468) <= 1e-4);
  REQUIRE(r.y_star.has_value());
  CHECK(rel_err(*r.y_star, 10.340530774) <= 1e-4);
  CHECK(r.mode == RateMode::exact_numeric);

  const RateResult s = rate_many(5.0, ManyParams{10.0, 15.0, 2});
  CHECK(rel_err(s.value, 3.92511661972) <= 1e-6);
  CHECK(rel_err(s.t_star, 1.26794543591) <= 1e-4);
  CHECK(rel_err(*s.y_star, 10.785023268) <= 1e-4);

  // Faster service decays faster; the two baselines already order this way.
  CHECK(s.value > r.value);

  // The source count is a simulation knob, not a rate input.
  CHECK(rate_many(5.0, ManyParams{10.0, 12.0, 500}).value == r.value);
}

TEST_CASE("many-source rate grows with threshold and service headroom") {
  double prev = 0.0;
  for (double u : {2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0}) {
    const double cur = rate_many(u, ManyParams{30.0, 32.0, 2}).value;
    CHECK(cur > prev + 1e-8);
    prev = cur;
  }

  double prev_h = 0.0;
  for (double h : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0}) {
    const double cur = rate_many(5.0, ManyParams{30.0, 30.0 + h, 2}).value;
    CHECK(cur > prev_h + 1e-8);
    prev_h = cur;
  }
}

TEST_CASE("many-source rate validates threshold, feasibility and stability") {
  CHECK(raises(errc::domain_error,
               [] { rate_many(0.0, ManyParams{10.0, 12.0, 2}); }));
  CHECK(raises(errc::infeasible,
               [] { rate_many(10.0, ManyParams{10.0, 12.0, 2}); }));
  CHECK(raises(errc::infeasible,
               [] { rate_many(12.0, ManyParams{10.0, 12.0, 2}); }));
  CHECK(raises(errc::unstable,
               [] { rate_many(5.0, ManyParams{10.0, 10.0, 2}); }));
}
