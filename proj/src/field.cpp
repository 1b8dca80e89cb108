#include "lsllab/field.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace lsl {

std::uint64_t memory_budget_bytes() {
  const char* env = std::getenv("LSL_LAB_BUDGET_MB");
  std::uint64_t mb = 512;
  if (env && *env) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || parsed == 0)
      throw std::runtime_error("LSL_LAB_BUDGET_MB must be a positive integer");
    mb = parsed;
  }
  return mb * 1024ull * 1024ull;
}

WindowRect window_rect(const WindowLaw& law, long long m, long long n) {
  NormalizerBundle b = rate_bundle(law, m, n);
  return WindowRect{m, n, static_cast<long long>(std::floor(b.a1)),
                    static_cast<long long>(std::floor(b.a2))};
}

namespace {

void check_rect(const WindowRect& r) {
  if (r.m < 3 || r.n < 3)
    throw std::domain_error("window rect: anchors must be >= 3");
  if (r.extent1 < 0 || r.extent2 < 0)
    throw std::invalid_argument("window rect: extents must be nonnegative");
}

void check_budget_cells(long long cells) {
  std::uint64_t budget = memory_budget_bytes();
  std::uint64_t need = static_cast<std::uint64_t>(cells) * sizeof(double);
  if (need > budget)
    throw std::length_error(
        "block of " + std::to_string(cells) + " cells needs " + std::to_string(need) +
        " bytes, over the LSL_LAB_BUDGET_MB budget of " + std::to_string(budget) +
        " bytes");
}

}  // namespace

Block sample_block(const DistributionSpec& dist, std::uint64_t seed,
                   const WindowRect& rect) {
  check_rect(rect);
  check_budget_cells(rect.cells());
  Block blk;
  blk.rows = rect.rows();
  blk.cols = rect.cols();
  blk.data.resize(static_cast<size_t>(rect.cells()));
  SplitMix64 g(stream_key(seed, static_cast<std::uint64_t>(rect.m),
                          static_cast<std::uint64_t>(rect.n)));
  for (double& x : blk.data) x = draw(dist, g);
  return blk;
}

double window_sum_naive(const Block& block) {
  double s = 0.0;
  for (long long r = 0; r < block.rows; ++r)
    for (long long c = 0; c < block.cols; ++c) s += block.at(r, c);
  return s;
}

PrefixTable::PrefixTable(const Block& block)
    : rows_(block.rows), cols_(block.cols), cum_(block.data.size()) {
  for (long long r = 0; r < rows_; ++r) {
    double row_run = 0.0;
    for (long long c = 0; c < cols_; ++c) {
      row_run += block.at(r, c);
      cum_[r * cols_ + c] = row_run + (r > 0 ? cum_[(r - 1) * cols_ + c] : 0.0);
    }
  }
}

double PrefixTable::sum(long long r0, long long c0, long long r1, long long c1) const {
  if (r0 < 0 || c0 < 0 || r1 >= rows_ || c1 >= cols_ || r0 > r1 || c0 > c1)
    throw std::out_of_range("PrefixTable::sum: bad rectangle");
  auto at = [&](long long r, long long c) -> double {
    return (r < 0 || c < 0) ? 0.0 : cum_[r * cols_ + c];
  };
  return at(r1, c1) - at(r0 - 1, c1) - at(r1, c0 - 1) + at(r0 - 1, c0 - 1);
}

double PrefixTable::total() const { return cum_.empty() ? 0.0 : cum_.back(); }

double window_sum_prefix(const Block& block) {
  return PrefixTable(block).total();
}

TruncationTriple truncate_split(double x, double b, double top) {
  if (!(b > 0.0) || !(top > b))
    throw std::invalid_argument("truncate_split: needs 0 < b < top");
  double a = std::fabs(x);
  if (a <= b) return {x, 0.0, 0.0};
  if (a < top) return {0.0, x, 0.0};
  return {0.0, 0.0, x};
}

namespace {

WindowStatistic run_window(const WindowLaw& law, const WindowRect& rect,
                           const DistributionSpec& dist, std::uint64_t seed,
                           double b, double top, double f) {
  check_rect(rect);
  if (rect.cells() > kDirectModeCellCap)
    throw std::length_error(
        "direct simulation capped at " + std::to_string(kDirectModeCellCap) +
        " cells per window (got " + std::to_string(rect.cells()) +
        "); use the surrogate mode for larger windows");
  check_budget_cells(rect.cells());
  (void)law;

  WindowStatistic w;
  w.b = b;
  w.top = top;
  w.cells = rect.cells();
  SplitMix64 g(stream_key(seed, static_cast<std::uint64_t>(rect.m),
                          static_cast<std::uint64_t>(rect.n)));
  for (long long k = 0; k < rect.cells(); ++k) {
    double x = draw(dist, g);
    TruncationTriple t = truncate_split(x, b, top);
    w.t += x;
    w.tp += t.small_part;
    w.tpp += t.middle_part;
    w.tppp += t.top_part;
  }
  w.normalized = w.t / std::sqrt(2.0 * f);
  return w;
}

}  // namespace

WindowStatistic windowed_statistic(const WindowLaw& law, long long m, long long n,
                                   const DistributionSpec& dist, std::uint64_t seed,
                                   double eps, double delta) {
  NormalizerBundle nb = rate_bundle(law, m, n);
  double b = truncation_level(law, m, n, eps, delta);
  double top = delta * std::sqrt(nb.f);
  if (!(top > b))
    throw std::invalid_argument(
        "windowed_statistic: truncation bands collapsed (top <= b); "
        "the anchors are too small for these eps/delta");
  WindowRect rect{m, n, static_cast<long long>(std::floor(nb.a1)),
                  static_cast<long long>(std::floor(nb.a2))};
  return run_window(law, rect, dist, seed, b, top, nb.f);
}

WindowStatistic windowed_statistic_with_levels(const WindowLaw& law, long long m,
                                               long long n, const DistributionSpec& dist,
                                               std::uint64_t seed, double b, double top) {
  NormalizerBundle nb = rate_bundle(law, m, n);
  WindowRect rect{m, n, static_cast<long long>(std::floor(nb.a1)),
                  static_cast<long long>(std::floor(nb.a2))};
  return run_window(law, rect, dist, seed, b, top, nb.f);
}

double surrogate_statistic(const WindowLaw& law, double m, double n, SplitMix64& g) {
  double rate = rate_real(law, m, n);
  double z = law.sigma * normal_draw(g);
  return z / std::sqrt(2.0 * rate);
}

LimsupTracker::LimsupTracker(TraceMode mode, bool record_all)
    : mode_(mode), record_all_(record_all) {}

void LimsupTracker::add(long long i, long long j, double m, double n,
                        double statistic) {
  double prev = count_ == 0 ? -std::numeric_limits<double>::infinity()
                            : best_.running_max;
  ++count_;
  bool record = statistic > prev;
  double run = record ? statistic : prev;
  TraceEntry e{i, j, m, n, statistic, run};
  if (record) best_ = e;
  if (record_all_ || record) entries_.push_back(e);
}

double LimsupTracker::current_max() const {
  if (count_ == 0) throw std::logic_error("LimsupTracker: empty");
  return best_.running_max;
}

const TraceEntry& LimsupTracker::best() const {
  if (count_ == 0) throw std::logic_error("LimsupTracker: empty");
  return best_;
}

}  // namespace lsl
