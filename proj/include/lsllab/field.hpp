#pragma once

#include <cstdint>
#include <vector>

#include "lsllab/distributions.hpp"
#include "lsllab/normalizers.hpp"

namespace lsl {

// Memory ceiling for materialized blocks, from LSL_LAB_BUDGET_MB (default 512).
std::uint64_t memory_budget_bytes();

// Hard cap on cells processed per window in direct simulation.
inline constexpr long long kDirectModeCellCap = 10'000'000;

// Inclusive index rectangle [m, m+extent1] x [n, n+extent2]. Extents are the
// floored axis lengths; flooring happens here and nowhere upstream.
struct WindowRect {
  long long m, n;
  long long extent1, extent2;

  long long rows() const { return extent1 + 1; }
  long long cols() const { return extent2 + 1; }
  long long cells() const { return rows() * cols(); }
};

WindowRect window_rect(const WindowLaw& law, long long m, long long n);

struct Block {
  long long rows = 0, cols = 0;
  std::vector<double> data;  // row-major

  double at(long long r, long long c) const { return data[r * cols + c]; }
};

// Fills the rectangle with i.i.d. draws from the stream keyed by
// (seed, rect.m, rect.n). Identical arguments give identical blocks no matter
// how calls are scheduled. Refuses blocks beyond the memory budget.
Block sample_block(const DistributionSpec& dist, std::uint64_t seed,
                   const WindowRect& rect);

// Plain double-loop accumulation; the reference answer.
double window_sum_naive(const Block& block);

// Cumulative-table pass over the same scan order. Exact for integer-valued
// entries, within small relative error otherwise.
double window_sum_prefix(const Block& block);

// Summed-area table over a block; sum(r0,c0,r1,c1) is the inclusive
// rectangle sum via four corner lookups.
class PrefixTable {
 public:
  explicit PrefixTable(const Block& block);
  double sum(long long r0, long long c0, long long r1, long long c1) const;
  double total() const;

 private:
  long long rows_, cols_;
  std::vector<double> cum_;
};

// Splits x into the three truncation bands: |x| <= b, b < |x| < top,
// |x| >= top. Exactly one component is nonzero (unless x is 0) and they
// always sum to x. Requires 0 < b < top.
struct TruncationTriple {
  double small_part, middle_part, top_part;
};
TruncationTriple truncate_split(double x, double b, double top);

struct WindowStatistic {
  double t = 0;     // full window sum
  double tp = 0;    // band |x| <= b
  double tpp = 0;   // band b < |x| < top
  double tppp = 0;  // band |x| >= top
  double normalized = 0;  // t / sqrt(2 f)
  double b = 0, top = 0;
  long long cells = 0;
};

// Direct simulation of one window with the law's truncation levels
// b (from truncation_level) and top = delta * sqrt(f). The stream is the
// same one sample_block uses, so T equals the naive sum over that block.
WindowStatistic windowed_statistic(const WindowLaw& law, long long m, long long n,
                                   const DistributionSpec& dist, std::uint64_t seed,
                                   double eps, double delta);

// Same walk with caller-chosen truncation levels.
WindowStatistic windowed_statistic_with_levels(const WindowLaw& law, long long m,
                                               long long n, const DistributionSpec& dist,
                                               std::uint64_t seed, double b, double top);

// CLT surrogate for the normalized window sum at a (possibly non-integer)
// anchor pair: Z / sqrt(2 rate) with Z ~ N(0, sigma^2) from the given stream.
double surrogate_statistic(const WindowLaw& law, double m, double n, SplitMix64& g);

enum class TraceMode { Direct, Surrogate };

struct TraceEntry {
  long long i, j;
  double m, n;
  double statistic;
  double running_max;
};

// Running maximum over a statistic stream. Keeps either every entry or just
// the record-breaking ones; the running maximum is nondecreasing either way.
class LimsupTracker {
 public:
  explicit LimsupTracker(TraceMode mode, bool record_all = true);

  void add(long long i, long long j, double m, double n, double statistic);

  TraceMode mode() const { return mode_; }
  const std::vector<TraceEntry>& entries() const { return entries_; }
  bool empty() const { return count_ == 0; }
  long long count() const { return count_; }
  double current_max() const;
  const TraceEntry& best() const;  // earliest achiever of the maximum

 private:
  TraceMode mode_;
  bool record_all_;
  long long count_ = 0;
  std::vector<TraceEntry> entries_;
  TraceEntry best_{};
};

}  // namespace lsl
