#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rcm/exponents.hpp"
#include "rcm/rng.hpp"

using namespace rcm;

TEST_SUITE("exponents") {

TEST_CASE("conjugate conventions") {
  CHECK(conjugate(1.0) == kInf);
  CHECK(conjugate(kInf) == 1.0);
  CHECK(conjugate(2.0) == doctest::Approx(2.0));
  CHECK(conjugate(3.0) == doctest::Approx(1.5));
}

TEST_CASE("rho kappa theta") {
  ExponentSet e{2, 3.0, 2.0};
  CHECK(e.rho() == doctest::Approx(2.0));  // d/(d-2+d/q) = 2/(0+1)
  CHECK(e.kappa() == doctest::Approx(0.5));
  CHECK(e.theta() == doctest::Approx(1.5 / 1.5));

  ExponentSet einf{2, 3.0, kInf};
  CHECK(std::isinf(einf.rho()));
  CHECK(einf.kappa() == 1.0);

  ExponentSet e3{3, 4.0, 6.0};
  CHECK(e3.rho() == doctest::Approx(3.0 / (1.0 + 0.5)));
}

TEST_CASE("mu_star exponent bookkeeping") {
  // gamma = (d(p-1)+4p)/(p+1): d=2, p=3 gives (4+12)/4 = 4
  ExponentSet e{2, 3.0, kInf};
  CHECK(e.gamma() == doctest::Approx(4.0));
  CHECK(e.gamma0() == doctest::Approx(4.0 * 4.0 / 6.0));
  ExponentSet einf{2, kInf, kInf};
  CHECK(einf.gamma() == doctest::Approx(6.0));
}

TEST_CASE("assumption verdicts at the spec's exponents") {
  auto r1 = check_assumptions(ExponentSet{2, kInf, kInf});
  CHECK(r1.moment_condition_11);  // 0 < 1
  CHECK_FALSE(r1.q_infinity_note.empty());

  auto r2 = check_assumptions(ExponentSet{2, 3.0, kInf});
  CHECK(r2.strong_first);   // 1/3 <= (1+1/3)/2
  CHECK(r2.strong_second);  // 1/2 < 1
  CHECK(r2.sobolev_condition);

  auto r3 = check_assumptions(ExponentSet{2, 3.0, 2.0});
  CHECK(r3.rho == doctest::Approx(2.0));
}

TEST_CASE("rejects out-of-range exponents") {
  CHECK_THROWS_AS(check_assumptions(ExponentSet{2, 1.0, 4.0}), std::invalid_argument);
  CHECK_THROWS_AS(check_assumptions(ExponentSet{2, 0.5, 4.0}), std::invalid_argument);
  CHECK_THROWS_AS(check_assumptions(ExponentSet{2, 4.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(check_assumptions(ExponentSet{1, 4.0, 4.0}), std::invalid_argument);
}

TEST_CASE("verdicts are monotone in p and q") {
  rng::Stream st = rng::stream(123, {77});
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + (st.next_u64() % 3);
    const double p = 1.0 + st.next_uniform(0.01, 9.0);
    const double q = 1.0 + st.next_uniform(0.01, 9.0);
    const double dp = st.next_uniform(0.0, 5.0);
    const double dq = st.next_uniform(0.0, 5.0);
    auto before = check_assumptions(ExponentSet{d, p, q});
    auto after = check_assumptions(ExponentSet{d, p + dp, q + dq});
    if (before.moment_condition_11) REQUIRE(after.moment_condition_11);
    if (before.strong_first) REQUIRE(after.strong_first);
    if (before.strong_second) REQUIRE(after.strong_second);
    if (before.sobolev_condition) REQUIRE(after.sobolev_condition);
  }
}

}  // TEST_SUITE
