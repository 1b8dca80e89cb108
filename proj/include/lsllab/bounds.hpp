#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lsllab/convergence.hpp"
#include "lsllab/normalizers.hpp"

namespace lsl {

// Parameters of the two-sided exponential tail bounds. The coupling N*delta
// >= eta makes N large enough that N summands of size delta cover an eta
// overshoot.
struct BoundParams {
  double eps = 1.0;
  double delta = 0.1;        // in (0,1)
  double gamma_slack = 0.1;  // > 0
  double sigma = 1.0;
  long long n_count = 1;     // N >= 1
  double eta = 0.1;
};

void validate(const BoundParams& p);

// Smallest N with N*delta >= eta, guarded against FP slop in eta/delta.
long long min_overshoot_count(double eta, double delta);

// P(Z > z) for standard normal Z.
double normal_upper_tail(double z);

// exp(-eps^2 (1-delta)^3 d / sigma^2) and
// exp(-eps^2 (1+delta)^2 (1+gamma) d / (sigma^2 (1-delta))); lower <= upper.
double kolmogorov_upper(const BoundParams& p, double d);
double kolmogorov_lower(const BoundParams& p, double d);

// Above this eps the per-cell upper bounds are summable over the proof grid.
double summability_threshold(double sigma, double delta);

struct SandwichReport {
  double d = 0;            // rate at the probed anchor
  double f = 0;            // normalizer at the anchor
  long long cells = 0;     // integer window cell count
  double b = 0;            // truncation level, chosen inactive (see below)
  double exact_tail = 0;   // normal tail of the bounded-part event
  double upper = 0;        // kolmogorov_upper at d
  double lower = 0;        // kolmogorov_lower at d
  double d0 = 0;           // scan: exact shape <= upper from here on
  double lower_lo = 0;     // scan: largest run with lower <= exact shape
  double lower_hi = 0;
  bool binding = false;    // d >= d0
  bool within_upper = false;
  bool above_lower = false;  // checked only when d lies in [lower_lo, lower_hi]
  double mc_tail = 0;
  double mc_se = 0;  // binomial SE at the exact tail probability
  bool mc_within_3se = false;
  long long replicates = 0;
  std::string status;  // "ok" or "bounds not yet binding"
};

// Probes the event {T' > eps sqrt(2 f)} for a Gaussian field at one anchor.
// The truncation level b is raised until the window has expected truncated
// mass <= 1e-6, so T' coincides with T and the exact tail is the normal tail
// Phi_bar(eps sqrt(2 f) / (sigma sqrt(cells))). A d-grid scan on [0.25, 60]
// locates d0 (upper bound binding) and the validated lower-bound run, and a
// Monte Carlo pass over `replicates` windows confirms the exact tail.
SandwichReport tprime_tail_sandwich(const WindowLaw& law, long long m, long long n,
                                    const BoundParams& p, double sigma,
                                    std::uint64_t seed,
                                    long long replicates = 1000000,
                                    int threads = 1);

struct MiddleBandBound {
  double shape = 0;        // (a1 a2 moment / H_b)^N
  double simplified = 0;   // ((llog m + llog n) llog(mn) / (log(mn))^3)^N
};

// Bound on P(at least N middle-band summands), binomial coefficient relaxed
// to area^N and the band probability to moment_value / H_at_b by Markov.
MiddleBandBound tdoubleprime_bound(const WindowLaw& law, long long m, long long n,
                                   long long N, double moment_value,
                                   double H_at_b);

// Classifies sum_{i >= i_start, j >= j_start} term(i, j) by shell slope over
// dyadic horizons {H/16 ... H} binned on max(i, j).
ShellDiagnostic summability_diagnostic(
    const std::function<double(long long, long long)>& term, long long i_start,
    long long j_start, long long max_horizon, double band = 0.02);

}  // namespace lsl
