#pragma once

#include <functional>
#include <vector>

#include "lsllab/convergence.hpp"
#include "lsllab/distributions.hpp"
#include "lsllab/normalizers.hpp"

namespace lsl {

// Growth functions G on [3, inf)^2, increasing in each coordinate, built from
// the per-regime normalizers with clamped logs:
//   case 1:  u v (llog u + llog v) / (log u log v)
//   case 2:  u v (llog u + llog v) / (llog u llog v)
//   case 3:  u v (llog u + llog v) / (log u llog v)
//   case 4:  u^alpha v log(uv) / log v
//   general: u v (r(u) + r(v)) / (L1(u) L2(v)),  r(x) = ln(L1(x) log x)
class GrowthFunction {
 public:
  static GrowthFunction case1();
  static GrowthFunction case2();
  static GrowthFunction case3();
  static GrowthFunction case4(double alpha);
  static GrowthFunction general(SlowlyVarying L1, SlowlyVarying L2);

  double operator()(double u, double v) const;
  int case_id() const { return case_id_; }  // 1..4, 5 for general
  double alpha() const { return alpha_; }

  static constexpr double kDomainMin = 3.0;

 private:
  GrowthFunction(int id, double alpha, std::function<double(double, double)> eval);
  int case_id_;
  double alpha_;
  std::function<double(double, double)> eval_;
};

// Lebesgue measure of {(u,v) in [3,inf)^2 : G(u,v) <= x}. Monotone slices in
// v are resolved by bisection, the u-integral by the log-axis midpoint rule
// refined to rel_tol. Returns 0 below G(3,3).
double sublevel_measure(const GrowthFunction& G, double x, double rel_tol = 1e-3);
// Same measure restricted to u in [u_lo, u_hi].
double sublevel_measure_slab(const GrowthFunction& G, double x, double u_lo,
                             double u_hi, double rel_tol = 1e-3);

// Closed-form desk asymptotes for the sublevel measures, valid for x >= e^2:
//   case 1: x (log x)^3 / llog x      case 2: x log x llog x
//   case 3: x (log x)^2               case 4: (x / log x)^(1/alpha)
double closed_form_M(int case_k, double x, double alpha = 0.0);

// The general-regime upper envelope with its free constant fixed to 1:
//   x L2(x) / r(x) * Integral_3^{x L1(x)/r(x)} L1(u)/u du,  r(x) = ln(L1(x) log x).
// Needs x >= e^e and L1 dominating L2.
double general_M_upper(const SlowlyVarying& L1, const SlowlyVarying& L2, double x);

// Weight whose expectation at X controls the window law per regime:
//   BothLog    x^2 (log x)^3 / llog x      BothLoglog x^2 log x llog x
//   LogLoglog  x^2 (log x)^2               PowerLog   (x^2 / log x)^(1/alpha)
double moment_function(Regime regime, double x, double alpha = 0.0);

enum class MomentClass { Finite, Infinite, Boundary };
const char* to_string(MomentClass c);

// Analytic verdict for E[moment_function(|X|)] under the log-perturbed tail
// x^-2 (log x)^-gamma (llog x)^-delta (x^(-2/alpha) in the power-log regime):
// finite iff gamma - p > 1, or gamma - p = 1 and delta - q > 1, where (p, q)
// is the regime's log weight. Exact boundary points classify as Infinite.
MomentClass classify_moment(const LogPerturbedParetoSpec& spec, Regime regime,
                            double alpha = 0.0);

struct EquivalenceReport {
  ShellDiagnostic lattice;      // double sum of P(X^2 > G(m,n))
  ShellDiagnostic integral;     // double integral of the same tail
  ShellDiagnostic expectation;  // E M(X^2) against the numeric measure
  std::vector<long long> horizons;
  bool agree = false;
  Verdict consensus = Verdict::Boundary;
};

// Runs the three finiteness probes to log-spaced horizons {H/16 ... H} and
// classifies each by shell slope. They estimate the same mass, so the
// verdicts must agree wherever no probe lands in the boundary band.
EquivalenceReport equivalence_check(const DistributionSpec& dist,
                                    const GrowthFunction& G, long long max_horizon,
                                    double band = 0.02);

}  // namespace lsl
