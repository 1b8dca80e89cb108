#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "lsllab/normalizers.hpp"

namespace lsl {

// Geometrically sparse anchor subsequences. Values can overflow a double for
// large indices, so every comparison below runs on ln(m_i), which stays small.
struct SqrtExpFamily {
  double c;  // m_i = exp(sqrt(c i)), admissible from i >= 1/c
};
struct OverLogFamily {
  double c;  // m_i = exp(c i / log(i+1)), admissible from i >= log(1/c)/c
};
struct PowerGridFamily {
  double c, alpha;  // m_i = c i^(1/(1-alpha)), admissible from i >= c^(alpha-1)
};
using SubseqFamily = std::variant<SqrtExpFamily, OverLogFamily, PowerGridFamily>;

const char* family_name(const SubseqFamily& fam);
double family_domain_start(const SubseqFamily& fam);    // real lower bound, >= 1
long long family_first_index(const SubseqFamily& fam);  // smallest admissible integer
// smallest admissible index whose value reaches the normalizer domain [3, inf)
long long family_first_anchor_index(const SubseqFamily& fam);
double subseq_log_value(const SubseqFamily& fam, double i);
double subseq_value(const SubseqFamily& fam, long long i);

// The c that ties a family to the window slack eta in the gap system:
// eta^2 for SqrtExp, eta^2/2 for OverLog, ((1-alpha)^2 eta^2)^(1/(1-alpha))
// for PowerGrid.
double coupled_c(const SubseqFamily& prototype, double eta);

struct GapInequality {
  std::string name;
  long long first_hold = -1;  // -1 when it never holds on the range
  std::vector<long long> later_violations;
  bool ok() const { return first_hold >= 0 && later_violations.empty(); }
};

struct GapReport {
  std::array<GapInequality, 4> rows;  // gap and length-ratio per axis
  double eta = 0, c = 0;
  bool all_ok() const;
};

// Checks, on indices [i_lo, i_hi], the two-sided gap system
//   m_{i+1} - m_i <= eta^2 a(m_i),   a(m_{i+1}) / a(m_i) <= 1 + 2 eta^2
// on both axes. For PowerGrid the first axis length is m^alpha (alpha from
// the family) and the second uses the given rule; the other families use the
// given rule on both axes. Requires the family's c to match coupled_c(eta).
GapReport gap_report(const SubseqFamily& fam, const AxisRule& rule, double eta,
                     long long i_lo, long long i_hi);

struct DisjointnessResult {
  bool found = false;
  long long threshold = -1;  // smallest i with no violation from i to i_max
  long long first_checked = 0;
  long long i_max = 0;
  long long violations = 0;  // total violations seen during the scan
};

// Smallest index from which consecutive windows stop overlapping:
// m_i + a(m_i) < m_{i+1} for every i in [threshold, i_max]. The integerized
// variant floors anchors and lengths first and is meant for ranges where the
// values still fit a double exactly.
DisjointnessResult disjointness_threshold(const SubseqFamily& fam, const AxisRule& rule,
                                          long long i_max, bool integerized = false);

struct VarianceBoundRow {
  std::string rect;
  double variance = 0;  // sigma^2 times the continuous cell count
  double bound = 0;
  bool ok() const { return variance <= bound; }
};

struct VarianceBoundReport {
  std::array<VarianceBoundRow, 4> rows;
  bool all_ok() const;
};

// Variances of the four bridging rectangles between consecutive anchors
// (m_i, n_j) -> (m_{i+1}, n_{j+1}), against the slack bounds
//   eta^4 a,  (1+k eta^2) eta^2 a,  (1+k eta^2)^2 a   (times sigma^2),
// with k = 3 for the log-log regime, k = 2 for loglog-loglog, and the
// slightly sharper split forms in the power-log regime.
VarianceBoundReport block_variance_bounds(const WindowLaw& law, const SubseqFamily& fam,
                                          double eta, long long i, long long j);

// Same checks at explicit anchors; test hook for degenerate gaps.
VarianceBoundReport block_variance_bounds_at(const WindowLaw& law, double eta,
                                             double m_i, double m_ip1, double n_j,
                                             double n_jp1);

}  // namespace lsl
