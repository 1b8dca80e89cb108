#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lsllab/logs.hpp"
#include "lsllab/quadrature.hpp"

using namespace lsl;

TEST_CASE("clamped logs sit at 1 below their knees") {
  CHECK(log_plus(2.0) == 1.0);
  CHECK(log_plus(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(log_plus(100.0) == doctest::Approx(std::log(100.0)));
  CHECK_THROWS_AS(log_plus(0.0), std::domain_error);
  CHECK_THROWS_AS(log_plus(-1.0), std::domain_error);

  CHECK(loglog_plus(10.0) == 1.0);
  CHECK(loglog_plus(15.0) == 1.0);  // below e^e the inner log is still small
  CHECK(loglog_plus(1e6) == doctest::Approx(std::log(std::log(1e6))));
}

TEST_CASE("raw iterated log refuses the region where it turns negative") {
  CHECK(loglog_raw(3.0) == doctest::Approx(std::log(std::log(3.0))));
  CHECK(loglog_raw(1e3) == doctest::Approx(std::log(std::log(1e3))));
  CHECK_THROWS_AS(loglog_raw(2.9), std::domain_error);
  CHECK_THROWS_AS(loglog_raw(1.0), std::domain_error);
}

TEST_CASE("slowly varying deflators multiply clamped factors") {
  SlowlyVarying L(1.0, 0.0);
  CHECK(L(100.0) == doctest::Approx(std::log(100.0)));
  CHECK(L(2.0) == 1.0);  // clamp keeps deflators >= 1

  SlowlyVarying L2(2.0, 1.0);
  double x = 1e8;
  CHECK(L2(x) ==
        doctest::Approx(std::pow(std::log(x), 2.0) * std::log(std::log(x))));
  CHECK(L2.log_from_logx(std::log(x)) == doctest::Approx(std::log(L2(x))));

  CHECK(L2.dominates(L));
  CHECK(!L.dominates(L2));
  CHECK(L.dominates(L));
  CHECK_THROWS_AS(SlowlyVarying(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SlowlyVarying(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("log-axis midpoint rule hits smooth integrals") {
  auto inv = [](double x) { return 1.0 / x; };
  CHECK(integrate_log_midpoint(inv, 1.0, std::exp(1.0), 1e-10) ==
        doctest::Approx(1.0).epsilon(1e-8));

  auto sq = [](double x) { return x * x; };
  CHECK(integrate_log_midpoint(sq, 1.0, 10.0, 1e-9) ==
        doctest::Approx(333.0).epsilon(1e-7));

  auto c = [](double) { return 2.5; };
  CHECK(integrate_log_midpoint(c, 2.0, 50.0, 1e-9) ==
        doctest::Approx(120.0).epsilon(1e-8));

  CHECK(integrate_log_midpoint(sq, 5.0, 5.0, 1e-9) == 0.0);
  CHECK_THROWS_AS(integrate_log_midpoint(sq, 0.0, 1.0, 1e-9), std::invalid_argument);
}

TEST_CASE("increasing-function solvers") {
  auto cube = [](double x) { return x * x * x; };
  CHECK(bisect_increasing(cube, 8.0, 0.5, 10.0) == doctest::Approx(2.0));
  // bisection runs in log-x, so the bracket must be positive
  CHECK_THROWS_AS(bisect_increasing(cube, 8.0, 0.0, 10.0), std::invalid_argument);

  // solve_increasing brackets by doubling from lo
  auto lin = [](double x) { return 3.0 * x - 1.0; };
  CHECK(solve_increasing(lin, 26.0, 1.0) == doctest::Approx(9.0));
  // already past the target at lo: returns lo
  CHECK(solve_increasing(lin, 0.5, 4.0) == 4.0);

  auto dec = [](double x) { return -x; };
  CHECK_THROWS_AS(solve_increasing(dec, 5.0, 1.0), std::runtime_error);
}
