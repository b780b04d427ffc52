#include "dzo/schedule.hpp"

#include <cmath>

#include "doctest.h"
#include "dzo/errors.hpp"

using namespace dzo;

TEST_CASE("sqrt-decay schedule values") {
  const Schedule s = schedule_theorem1(1.0, 4, 1.0, 1.0, 1.0, 1.5);
  CHECK(s.eta_at(1) == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  CHECK(s.eta_at(9) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  // gamma = 3/2 puts the radius exponent at 1/2
  CHECK(s.u_at(4) == doctest::Approx(s.u_at(1) / 2.0).epsilon(1e-14));
  CHECK_FALSE(s.constant_eta);

  CHECK_THROWS_AS(schedule_theorem1(1.0, 4, 0.0, 1.0, 1.0, 1.5), InvalidArgument);
  CHECK_THROWS_AS(schedule_theorem1(1.0, 4, 1.2, 1.0, 1.0, 1.5), InvalidArgument);
  // a zero radius never reaches the estimator
  CHECK_THROWS_AS(schedule_theorem1(1.0, 4, 1.0, 0.0, 1.0, 1.5), InvalidArgument);
  CHECK_THROWS_AS(schedule_theorem1(1.0, 4, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("offset-decay schedule: burn-in offset by substitution") {
  // mu = L = 1, rho = 0, d = 1, alpha_eta = 2:
  // lower bound = 4 * 32/3 - 1 = 125/3, so t0 = 42
  const Schedule s = schedule_theorem2(1.0, 1.0, 1, 0.0, 2.0, 1.0);
  CHECK(s.eta_at(1) == doctest::Approx(4.0 / 43.0).epsilon(1e-14));
  CHECK(s.u_at(1) == doctest::Approx(1.0 / std::sqrt(43.0)).epsilon(1e-14));
  for (std::int64_t t = 1; t < 50; ++t) {
    CHECK(s.eta_at(t + 1) < s.eta_at(t));
    CHECK(s.u_at(t + 1) < s.u_at(t));
  }
  CHECK_THROWS_AS(schedule_theorem2(1.0, 1.0, 1, 0.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(schedule_theorem2(2.0, 1.0, 1, 0.0, 2.0, 1.0), InvalidArgument);
}

TEST_CASE("constant-step schedule ceiling") {
  const auto u = [](std::int64_t t) { return 0.1 / static_cast<double>(t); };
  // rho -> 0 leaves the 1/6 branch
  CHECK(schedule_theorem3(1.0, 0.0, u).eta_at(1) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(schedule_theorem3(2.0, 0.0, u).eta_at(5) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  // rho = 1/sqrt(2): (1 - rho^2)^2 / (4 rho^2 (3 + 4 rho^2)) = 1/40
  const Schedule s = schedule_theorem3(1.0, 1.0 / std::sqrt(2.0), u);
  CHECK(s.eta_at(1) == doctest::Approx(1.0 / 40.0).epsilon(1e-12));
  CHECK(s.constant_eta);

  // non-square-summable radius families are rejected
  CHECK_THROWS_AS(
      schedule_theorem3(1.0, 0.0, [](std::int64_t) { return 0.5; }),
      InvalidArgument);
  CHECK_THROWS_AS(schedule_theorem3(
                      1.0, 0.0,
                      [](std::int64_t t) {
                        return 1.0 / std::sqrt(static_cast<double>(t));
                      }),
                  InvalidArgument);
}

TEST_CASE("linear-rate schedule: decay factor by substitution") {
  CHECK(theorem4_lambda(1.0, 1.0, 0.0, 1.0) ==
        doctest::Approx(0.96).epsilon(1e-15));
  // mu/L = 1/8: (1/8)^{4/3} = 1/16, lambda = 1 - 1/400
  CHECK(theorem4_lambda(1.0, 8.0, 0.0, 1.0) ==
        doctest::Approx(0.9975).epsilon(1e-12));

  const Schedule s = schedule_theorem4(1.0, 1.0, 0.0, 1.0, 1.0, 0.9);
  CHECK(s.eta_at(1) == doctest::Approx(1.0 / 14.0).epsilon(1e-15));
  CHECK(s.eta_at(100) == s.eta_at(1));
  CHECK(s.lambda == doctest::Approx(0.96).epsilon(1e-15));
  CHECK(s.u_at(2) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(s.u_at(4) == doctest::Approx(0.81).epsilon(1e-14));

  CHECK_THROWS_AS(schedule_theorem4(1.0, 1.0, 0.0, 1.0, 1.0, 0.96),
                  InvalidArgument);
  CHECK_THROWS_AS(schedule_theorem4(1.0, 1.0, 0.0, 1.0, 1.0, 1.2),
                  InvalidArgument);
  CHECK_THROWS_AS(schedule_theorem4(1.0, 1.0, 0.0, 1.5, 1.0, 0.9),
                  InvalidArgument);
}

TEST_CASE("manual power-law schedule") {
  const Schedule s = schedule_manual(0.02, 0.5, 4.0, 0.75);
  CHECK(s.eta_at(4) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(s.u_at(16) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_FALSE(s.constant_eta);
  CHECK(schedule_manual(0.02, 0.0, 4.0, 0.75).constant_eta);
  CHECK_THROWS_AS(schedule_manual(0.0, 0.5, 4.0, 0.75), InvalidArgument);
}

TEST_CASE("square-sum of the radius sequence") {
  // sum (0.1/t)^2 = 0.01 * pi^2 / 6
  const double s = sum_u_squared(
      [](std::int64_t t) { return 0.1 / static_cast<double>(t); });
  CHECK(s == doctest::Approx(0.01 * std::acos(-1.0) * std::acos(-1.0) / 6.0)
                 .epsilon(1e-6));
  // geometric decay sums to u1^2 / (1 - q^2) with u_t = q^{t-1}
  const double g = sum_u_squared(
      [](std::int64_t t) { return std::pow(0.5, static_cast<double>(t - 1)); });
  CHECK(g == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
}
