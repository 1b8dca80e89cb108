#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lsllab/subsequence.hpp"

using namespace lsl;

TEST_CASE("family values and domains") {
  SubseqFamily se = SqrtExpFamily{1.0};
  CHECK(subseq_value(se, 100) == doctest::Approx(std::exp(10.0)).epsilon(1e-14));
  CHECK(subseq_log_value(se, 100.0) == doctest::Approx(10.0));
  CHECK(family_first_index(se) == 1);

  SubseqFamily ol = OverLogFamily{2.0};
  CHECK(subseq_value(ol, 10) ==
        doctest::Approx(std::exp(20.0 / std::log(11.0))).epsilon(1e-14));
  CHECK(family_first_index(ol) == 1);

  SubseqFamily pg = PowerGridFamily{2.0, 0.5};
  CHECK(subseq_value(pg, 9) == doctest::Approx(2.0 * 81.0));  // c i^{1/(1-alpha)}
  CHECK(family_first_index(pg) == 1);

  // below the domain start the values are rejected, not clamped
  SubseqFamily tight = SqrtExpFamily{0.01};  // domain starts at i = 100
  CHECK(family_first_index(tight) == 100);
  CHECK_THROWS_AS(subseq_value(tight, 50), std::domain_error);
}

TEST_CASE("first usable anchor reaches the normalizer domain") {
  // e^sqrt(0.25 i) >= 3 needs i >= ln(3)^2 / 0.25 = 4.83
  CHECK(family_first_anchor_index(SqrtExpFamily{0.25}) == 5);
  CHECK(subseq_value(SqrtExpFamily{0.25}, 5) >= 3.0);
  CHECK(subseq_value(SqrtExpFamily{0.25}, 4) < 3.0);
  CHECK(family_first_anchor_index(SqrtExpFamily{3.0}) == 1);
  CHECK(family_first_anchor_index(PowerGridFamily{2.0, 0.5}) == 2);
}

TEST_CASE("coupled c per family") {
  CHECK(coupled_c(SqrtExpFamily{1.0}, 0.2) == doctest::Approx(0.04));
  CHECK(coupled_c(OverLogFamily{1.0}, 0.2) == doctest::Approx(0.02));
  CHECK(coupled_c(PowerGridFamily{1.0, 0.5}, 0.2) ==
        doctest::Approx(std::pow(0.25 * 0.04, 2.0)));  // ((1-a)^2 eta^2)^{1/(1-a)}
  CHECK_THROWS_AS(coupled_c(SqrtExpFamily{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("gap systems hold from a finite threshold onward") {
  double eta = 0.2;
  SubseqFamily se = SqrtExpFamily{coupled_c(SqrtExpFamily{1.0}, eta)};
  GapReport g1 = gap_report(se, LogFractionRule{}, eta, family_first_index(se), 100000);
  CHECK(g1.all_ok());

  SubseqFamily ol = OverLogFamily{coupled_c(OverLogFamily{1.0}, eta)};
  GapReport g2 =
      gap_report(ol, LogLogFractionRule{}, eta, family_first_index(ol), 100000);
  CHECK(g2.all_ok());

  SubseqFamily pg = PowerGridFamily{coupled_c(PowerGridFamily{1.0, 0.5}, eta), 0.5};
  GapReport g3 = gap_report(pg, LogFractionRule{}, eta, family_first_index(pg), 100000);
  CHECK(g3.all_ok());
  for (const auto& row : g3.rows) {
    CHECK(row.first_hold >= 0);
    CHECK(row.later_violations.empty());
  }

  // the wrong c is rejected up front: the system is tied to eta
  CHECK_THROWS_AS(gap_report(SqrtExpFamily{1.0}, LogFractionRule{}, eta, 1, 100),
                  std::invalid_argument);
}

TEST_CASE("disjointness thresholds for the lower-bound windows") {
  DisjointnessResult r1 =
      disjointness_threshold(SqrtExpFamily{3.0}, LogFractionRule{}, 1000000);
  CHECK(r1.found);
  CHECK(r1.threshold == 1);

  DisjointnessResult r2 =
      disjointness_threshold(OverLogFamily{2.0}, LogLogFractionRule{}, 1000000);
  CHECK(r2.found);

  DisjointnessResult r3 =
      disjointness_threshold(PowerGridFamily{2.0, 0.5}, PowerRule{0.5}, 1000000);
  CHECK(r3.found);

  // negative control: c <= 2 makes sqrt-exp windows overlap forever
  DisjointnessResult bad =
      disjointness_threshold(SqrtExpFamily{0.25}, LogFractionRule{}, 50000);
  CHECK(!bad.found);
  CHECK(bad.violations > 0);
}

TEST_CASE("block variance bounds between consecutive anchors") {
  double eta = 0.2;
  SubseqFamily se = SqrtExpFamily{coupled_c(SqrtExpFamily{1.0}, eta)};
  WindowLaw law = log_log_law();
  for (long long i : {200ll, 2000ll, 20000ll}) {
    VarianceBoundReport rep = block_variance_bounds(law, se, eta, i, i);
    CHECK(rep.all_ok());
    for (const auto& row : rep.rows) {
      CHECK(row.variance >= 0.0);
      CHECK(row.variance <= row.bound);
    }
  }

  // degenerate gap: equal anchors give zero-variance bridges under any bound
  VarianceBoundReport flat = block_variance_bounds_at(law, eta, 100.0, 100.0,
                                                      150.0, 150.0);
  for (const auto& row : flat.rows) {
    CHECK(row.variance >= 0.0);
    CHECK(row.ok());
  }
}
