#pragma once

#include <cstdint>
#include <variant>

#include "lsllab/logs.hpp"

namespace lsl {

// One axis of a delayed window anchored at n: the window covers the lattice
// interval [n, n + length]. Length rules:
//   PowerRule          n^alpha, 0 < alpha < 1
//   LogFractionRule    n / log n
//   LogLogFractionRule n / loglog n
//   GeneralSVRule      n / L(n), L nondecreasing slowly varying
// Deflators evaluate clamped (>= 1), so a length never exceeds its anchor.
struct PowerRule {
  double alpha;
};
struct LogFractionRule {};
struct LogLogFractionRule {};
struct GeneralSVRule {
  SlowlyVarying L;
};
using AxisRule = std::variant<PowerRule, LogFractionRule, LogLogFractionRule, GeneralSVRule>;

struct WindowLaw {
  AxisRule axis1;
  AxisRule axis2;
  double sigma = 1.0;
};

// Supported axis pairings. PowerPower exists only for the reference constant;
// it has no rate bundle here.
enum class Regime { BothLog, BothLoglog, LogLoglog, PowerLog, General, PowerPower };

WindowLaw log_log_law(double sigma = 1.0);
WindowLaw loglog_loglog_law(double sigma = 1.0);
WindowLaw log_loglog_law(double sigma = 1.0);
WindowLaw power_log_law(double alpha, double sigma = 1.0);
WindowLaw general_law(SlowlyVarying L1, SlowlyVarying L2, double sigma = 1.0);
WindowLaw power_power_law(double alpha1, double alpha2, double sigma = 1.0);

Regime classify_regime(const WindowLaw& law);
const char* to_string(Regime r);

// Window length on one axis. Anchors below 3 are rejected, not clamped.
double axis_length(const AxisRule& rule, long long n);
double axis_length_real(const AxisRule& rule, double x);

// ln(a(m)) given ln m. Safe when m itself would overflow a double.
double axis_log_length_from_logm(const AxisRule& rule, double log_m);
// ln(L(m)) for the deflator rules, given ln m. Power has no deflator.
double deflator_log_from_logm(const AxisRule& rule, double log_m);

// Everything the tail estimates need at one anchor pair: axis lengths, their
// product (area), the exponential decay rate d, and f = area * rate, which
// normalizes the window sums as sqrt(2 f).
struct NormalizerBundle {
  long long m = 0, n = 0;
  double a1 = 0, a2 = 0;
  double area = 0;
  double rate = 0;
  double rate_m = 0, rate_n = 0;  // rate = rate_m + rate_n
  double f = 0;
};

NormalizerBundle rate_bundle(const WindowLaw& law, long long m, long long n);

// Per-coordinate rate at a real anchor, and the pair rate. Used where anchors
// come from a geometric subsequence and are not integers.
double rate_coordinate_real(const WindowLaw& law, double x);
double rate_real(const WindowLaw& law, double m, double n);

// One-dimensional normalizer f_n = min{a_n d_n, n} for the n/L(n) rules.
double normalizer_f_1d(const AxisRule& rule, long long n);

// Truncation boundary b = (sigma delta / eps) sqrt(area / rate). Satisfies
// area / b = (eps / (sigma delta)) sqrt(f).
double truncation_level(const WindowLaw& law, long long m, long long n,
                        double eps, double delta);

// The almost-sure limiting constant for the normalized window sums: sigma in
// every deflator regime, sigma sqrt(1 - min(alpha1, alpha2)) when both axes
// are power rules.
double lsl_constant(const WindowLaw& law);

}  // namespace lsl
