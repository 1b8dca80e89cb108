#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lsllab/moments.hpp"

using namespace lsl;

namespace {
double llog_p(double x) { return loglog_plus(x); }
}  // namespace

TEST_CASE("growth functions follow their defining formulas") {
  GrowthFunction g1 = GrowthFunction::case1();
  CHECK(g1(3.0, 3.0) ==
        doctest::Approx(18.0 / (std::log(3.0) * std::log(3.0))).epsilon(1e-13));
  double u = 1e4, v = 1e5;
  CHECK(g1(u, v) == doctest::Approx(u * v * (llog_p(u) + llog_p(v)) /
                                    (std::log(u) * std::log(v)))
                        .epsilon(1e-13));

  GrowthFunction g2 = GrowthFunction::case2();
  CHECK(g2(u, v) == doctest::Approx(u * v * (llog_p(u) + llog_p(v)) /
                                    (llog_p(u) * llog_p(v)))
                        .epsilon(1e-13));

  GrowthFunction g3 = GrowthFunction::case3();
  CHECK(g3(u, v) == doctest::Approx(u * v * (llog_p(u) + llog_p(v)) /
                                    (std::log(u) * llog_p(v)))
                        .epsilon(1e-13));

  GrowthFunction g4 = GrowthFunction::case4(0.5);
  CHECK(g4(u, v) == doctest::Approx(std::sqrt(u) * v * std::log(u * v) /
                                    std::log(v))
                        .epsilon(1e-13));

  CHECK_THROWS_AS(g1(2.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(g1(10.0, 2.9), std::domain_error);
  CHECK_THROWS_AS(GrowthFunction::case4(1.0), std::invalid_argument);
  CHECK_THROWS_AS(GrowthFunction::case4(0.0), std::invalid_argument);

  // increasing in each coordinate on a sample grid
  for (double a : {3.0, 10.0, 1e3, 1e6})
    CHECK(g1(a * 1.5, 50.0) > g1(a, 50.0));
}

TEST_CASE("sublevel measures match an independent quadrature oracle") {
  GrowthFunction g2 = GrowthFunction::case2();
  // oracle: adaptive Gauss quadrature over bisected slice boundaries
  CHECK(sublevel_measure(g2, 1e4, 1e-4) ==
        doctest::Approx(38725.559324).epsilon(5e-4));
  CHECK(sublevel_measure(g2, 1e6, 1e-4) ==
        doctest::Approx(8750888.0413).epsilon(5e-4));
  CHECK(sublevel_measure(g2, 1e8, 1e-4) ==
        doctest::Approx(1448651433.2).epsilon(5e-4));
  // below the corner value the region is empty
  CHECK(sublevel_measure(g2, 1.0) == 0.0);
  CHECK(sublevel_measure(GrowthFunction::case1(), 10.0) == 0.0);

  // slab decomposition adds up to the full measure
  double whole = sublevel_measure(g2, 1e6, 1e-4);
  double left = sublevel_measure_slab(g2, 1e6, 3.0, 50.0, 1e-5);
  double right = sublevel_measure_slab(g2, 1e6, 50.0, 1e300, 1e-5);
  CHECK(whole == doctest::Approx(left + right).epsilon(1e-3));
}

TEST_CASE("closed-form asymptotes") {
  double x = 1e8;
  CHECK(closed_form_M(1, x) ==
        doctest::Approx(x * std::pow(std::log(x), 3.0) / llog_p(x)).epsilon(1e-13));
  CHECK(closed_form_M(2, x) ==
        doctest::Approx(x * std::log(x) * llog_p(x)).epsilon(1e-13));
  CHECK(closed_form_M(3, x) ==
        doctest::Approx(x * std::pow(std::log(x), 2.0)).epsilon(1e-13));
  CHECK(closed_form_M(4, 1e6, 0.5) ==
        doctest::Approx(5239213805.878).epsilon(1e-10));
  CHECK_THROWS_AS(closed_form_M(1, 5.0), std::domain_error);  // needs x >= e^2
  CHECK_THROWS_AS(closed_form_M(5, 1e6), std::invalid_argument);
}

TEST_CASE("general upper envelope reduces to a closed integral for L = log") {
  SlowlyVarying lg = SlowlyVarying::log_deflator();
  double x = 1e6;
  double r = std::log(std::log(x) * std::log(x));  // ln(L1(x) log x)
  double upper_limit = x * std::log(x) / r;
  double integral =
      0.5 * (std::pow(std::log(upper_limit), 2.0) - std::pow(std::log(3.0), 2.0));
  CHECK(general_M_upper(lg, lg, x) ==
        doctest::Approx(x * std::log(x) / r * integral).epsilon(1e-6));
  CHECK_THROWS_AS(general_M_upper(lg, lg, 10.0), std::domain_error);
  // L1 must dominate L2
  CHECK_THROWS_AS(
      general_M_upper(lg, SlowlyVarying(2.0, 0.0), 1e6), std::invalid_argument);
}

TEST_CASE("moment weights per regime") {
  double x = 100.0;
  CHECK(moment_function(Regime::BothLog, x) ==
        doctest::Approx(x * x * std::pow(std::log(x), 3.0) / llog_p(x)));
  CHECK(moment_function(Regime::BothLoglog, x) ==
        doctest::Approx(x * x * std::log(x) * llog_p(x)));
  CHECK(moment_function(Regime::LogLoglog, x) ==
        doctest::Approx(x * x * std::pow(std::log(x), 2.0)));
  CHECK(moment_function(Regime::PowerLog, x, 0.5) ==
        doctest::Approx(std::pow(x * x / std::log(x), 2.0)));
  CHECK_THROWS_AS(moment_function(Regime::General, x), std::invalid_argument);
  CHECK_THROWS_AS(moment_function(Regime::BothLog, 0.0), std::domain_error);
}

TEST_CASE("analytic moment classification straddles each boundary") {
  struct Row {
    Regime regime;
    double beta, gamma;
    MomentClass expect;
  };
  // the verdict flips at gamma = p + 1 with (p, q) the regime's log weight
  const Row table[] = {
      {Regime::BothLog, 2.0, 0.0, MomentClass::Infinite},
      {Regime::BothLog, 2.0, 2.5, MomentClass::Infinite},
      {Regime::BothLog, 2.0, 5.5, MomentClass::Finite},
      {Regime::BothLoglog, 2.0, 0.0, MomentClass::Infinite},
      {Regime::BothLoglog, 2.0, 0.5, MomentClass::Infinite},
      {Regime::BothLoglog, 2.0, 3.5, MomentClass::Finite},
      {Regime::LogLoglog, 2.0, 0.0, MomentClass::Infinite},
      {Regime::LogLoglog, 2.0, 1.5, MomentClass::Infinite},
      {Regime::LogLoglog, 2.0, 4.5, MomentClass::Finite},
      {Regime::PowerLog, 4.0, -5.0, MomentClass::Infinite},
      {Regime::PowerLog, 4.0, 0.5, MomentClass::Finite},
      {Regime::PowerLog, 4.0, 2.0, MomentClass::Finite},
  };
  for (const Row& row : table) {
    LogPerturbedParetoSpec spec(row.beta, row.gamma, 0.0);
    CHECK(classify_moment(spec, row.regime, 0.5) == row.expect);
  }

  // exact boundary sits on the divergent side
  CHECK(classify_moment(LogPerturbedParetoSpec(2.0, 4.0, 0.0), Regime::BothLog) ==
        MomentClass::Infinite);
  CHECK(classify_moment(LogPerturbedParetoSpec(2.0, 4.0, 2.5), Regime::BothLog) ==
        MomentClass::Finite);  // second-order exponent breaks the tie

  // the tail's square weight must match the regime
  CHECK_THROWS_AS(classify_moment(LogPerturbedParetoSpec(3.0, 0.0, 0.0),
                                  Regime::BothLog),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_moment(LogPerturbedParetoSpec(2.0, 0.0, 0.0),
                                  Regime::PowerLog, 0.5),
                  std::invalid_argument);
}

TEST_CASE("finiteness probes agree with the analytic verdict") {
  GrowthFunction g1 = GrowthFunction::case1();
  EquivalenceReport fin = equivalence_check(
      DistributionSpec(LogPerturbedParetoSpec(2.0, 5.5, 0.0)), g1, 1024);
  CHECK(fin.agree);
  CHECK(fin.consensus == Verdict::Convergent);

  EquivalenceReport inf = equivalence_check(
      DistributionSpec(LogPerturbedParetoSpec(2.0, 0.0, 0.0)), g1, 1024);
  CHECK(inf.consensus == Verdict::Divergent);

  // members without a closed tail cannot feed the probes
  CHECK_THROWS_AS(
      equivalence_check(DistributionSpec(StudentTSpec{3.0}), g1, 1024),
      std::invalid_argument);
  CHECK_THROWS_AS(
      equivalence_check(DistributionSpec(LogPerturbedParetoSpec(2.0, 5.5, 0.0)),
                        g1, 32),
      std::invalid_argument);  // horizon too small for four shells
}
