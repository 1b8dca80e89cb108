#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "lsllab/field.hpp"

using namespace lsl;

TEST_CASE("prefix sums equal the naive double loop") {
  SplitMix64 g(4242);
  for (int k = 0; k < 200; ++k) {
    WindowRect rect{3 + static_cast<long long>(g.next() % 500),
                    3 + static_cast<long long>(g.next() % 500),
                    static_cast<long long>(g.next() % 64),
                    static_cast<long long>(g.next() % 64)};
    if (k % 2 == 0) {
      Block b = sample_block(RademacherSpec{}, g.next(), rect);
      CHECK(window_sum_prefix(b) == window_sum_naive(b));  // integer arithmetic
    } else {
      Block b = sample_block(GaussianSpec{1.0}, g.next(), rect);
      double naive = window_sum_naive(b);
      double tol = 1e-9 * std::max(1.0, std::fabs(naive));
      CHECK(std::fabs(window_sum_prefix(b) - naive) <= tol);
    }
  }
}

TEST_CASE("summed-area rectangle queries match direct sums") {
  WindowRect rect{10, 10, 12, 9};
  Block b = sample_block(GaussianSpec{1.0}, 8, rect);
  PrefixTable table(b);
  SplitMix64 g(3);
  for (int k = 0; k < 100; ++k) {
    long long r0 = g.next() % b.rows, r1 = g.next() % b.rows;
    long long c0 = g.next() % b.cols, c1 = g.next() % b.cols;
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    double direct = 0;
    for (long long r = r0; r <= r1; ++r)
      for (long long c = c0; c <= c1; ++c) direct += b.at(r, c);
    CHECK(table.sum(r0, c0, r1, c1) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(table.total() == doctest::Approx(window_sum_naive(b)).epsilon(1e-12));
  CHECK_THROWS_AS(table.sum(0, 0, b.rows, 0), std::out_of_range);
}

TEST_CASE("blocks reproduce for equal keys and differ across anchors") {
  WindowRect rect{100, 200, 5, 7};
  Block a = sample_block(GaussianSpec{1.0}, 11, rect);
  Block b = sample_block(GaussianSpec{1.0}, 11, rect);
  CHECK(a.data == b.data);
  WindowRect shifted{101, 200, 5, 7};
  Block c = sample_block(GaussianSpec{1.0}, 11, shifted);
  CHECK(a.data != c.data);
}

TEST_CASE("truncation split is exact and exclusive") {
  TruncationTriple t = truncate_split(0.5, 1.0, 3.0);
  CHECK(t.small_part == 0.5);
  CHECK(t.middle_part == 0.0);
  CHECK(t.top_part == 0.0);
  t = truncate_split(-2.0, 1.0, 3.0);
  CHECK(t.middle_part == -2.0);
  t = truncate_split(3.0, 1.0, 3.0);  // boundary belongs to the top band
  CHECK(t.top_part == 3.0);
  t = truncate_split(1.0, 1.0, 3.0);  // boundary belongs to the small band
  CHECK(t.small_part == 1.0);
  SplitMix64 g(6);
  for (int k = 0; k < 1000; ++k) {
    double x = 10.0 * (g.next_open() - 0.5);
    TruncationTriple s = truncate_split(x, 0.8, 2.5);
    CHECK(s.small_part + s.middle_part + s.top_part == x);  // exact by construction
    int active = (s.small_part != 0) + (s.middle_part != 0) + (s.top_part != 0);
    CHECK(active <= 1);
  }
  CHECK_THROWS_AS(truncate_split(1.0, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(truncate_split(1.0, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("windowed statistic splits its own sum") {
  WindowLaw law = log_log_law();
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    WindowStatistic w =
        windowed_statistic(law, 500, 400, GaussianSpec{1.0}, seed, 1.0, 0.1);
    CHECK(std::fabs(w.t - (w.tp + w.tpp + w.tppp)) <=
          1e-9 * std::max(1.0, std::fabs(w.t)));
    NormalizerBundle nb = rate_bundle(law, 500, 400);
    CHECK(w.normalized == doctest::Approx(w.t / std::sqrt(2.0 * nb.f)));
    CHECK(w.cells ==
          (static_cast<long long>(std::floor(nb.a1)) + 1) *
              (static_cast<long long>(std::floor(nb.a2)) + 1));
  }
}

TEST_CASE("running maximum tracker records and reports") {
  LimsupTracker all(TraceMode::Direct, true);
  all.add(1, 1, 3, 3, 1.0);
  all.add(1, 2, 3, 4, 3.0);
  all.add(2, 1, 4, 3, 2.0);
  REQUIRE(all.entries().size() == 3);
  CHECK(all.entries()[0].running_max == 1.0);
  CHECK(all.entries()[1].running_max == 3.0);
  CHECK(all.entries()[2].running_max == 3.0);  // running max holds at 3
  CHECK(all.current_max() == 3.0);
  CHECK(all.best().i == 1);
  CHECK(all.best().j == 2);

  LimsupTracker records(TraceMode::Surrogate, false);
  records.add(1, 1, 3, 3, 1.0);
  records.add(1, 2, 3, 4, 3.0);
  records.add(2, 1, 4, 3, 2.0);  // not a record, dropped
  CHECK(records.entries().size() == 2);
  CHECK(records.count() == 3);
  CHECK(records.current_max() == 3.0);

  LimsupTracker empty(TraceMode::Direct);
  CHECK(empty.empty());
  CHECK_THROWS_AS(empty.current_max(), std::logic_error);
}

TEST_CASE("surrogate statistics have variance sigma^2 over twice the rate") {
  WindowLaw law = log_log_law(1.0);
  double rate = rate_real(law, 1000.0, 1000.0);
  SplitMix64 g(1302);
  double s2 = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    double z = surrogate_statistic(law, 1000.0, 1000.0, g);
    s2 += z * z;
  }
  CHECK(s2 / n == doctest::Approx(1.0 / (2.0 * rate)).epsilon(0.03));
}

TEST_CASE("memory budget refusals name the block and the cap") {
  WindowRect huge{1000, 1000, 99999, 99999};  // 10^10 cells, 80 GB
  try {
    sample_block(GaussianSpec{1.0}, 1, huge);
    FAIL("expected a budget refusal");
  } catch (const std::length_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("bytes") != std::string::npos);
    CHECK(msg.find("LSL_LAB_BUDGET_MB") != std::string::npos);
  }
}

TEST_CASE("truncated-mass drift shrinks along the diagonal") {
  // |E T'| <= cells * E|X| 1{|X| > b}; for a unit Gaussian that mass is
  // sqrt(2/pi) exp(-b^2/2), and b grows with the anchors, so the bound over
  // sqrt(f) must fall monotonically along the both-log diagonal
  WindowLaw law = log_log_law();
  double prev = 1e300;
  for (long long m : {100ll, 1000ll, 10000ll, 100000ll}) {
    NormalizerBundle nb = rate_bundle(law, m, m);
    double b = truncation_level(law, m, m, 1.0, 0.1);
    WindowRect rect = window_rect(law, m, m);
    double mass = std::sqrt(2.0 / M_PI) * std::exp(-0.5 * b * b);
    double drift = rect.cells() * mass / std::sqrt(nb.f);
    CHECK(drift < prev);
    prev = drift;
  }

  // and the empirical bounded-part mean stays at its sampling noise level
  double sum_tp = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    WindowStatistic w =
        windowed_statistic(law, 1000, 1000, GaussianSpec{1.0}, 7000 + r, 1.0, 0.1);
    sum_tp += w.tp;
  }
  WindowRect rect = window_rect(law, 1000, 1000);
  double noise = std::sqrt(static_cast<double>(rect.cells()) / reps);
  CHECK(std::fabs(sum_tp / reps) < 4.0 * noise);
}
