#include "lsllab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lsllab/quadrature.hpp"

namespace lsl {

GrowthFunction::GrowthFunction(int id, double alpha,
                               std::function<double(double, double)> eval)
    : case_id_(id), alpha_(alpha), eval_(std::move(eval)) {}

double GrowthFunction::operator()(double u, double v) const {
  if (!(u >= kDomainMin) || !(v >= kDomainMin))
    throw std::domain_error("GrowthFunction: arguments must be >= 3");
  return eval_(u, v);
}

GrowthFunction GrowthFunction::case1() {
  return {1, 0.0, [](double u, double v) {
            return u * v * (loglog_plus(u) + loglog_plus(v)) /
                   (log_plus(u) * log_plus(v));
          }};
}

GrowthFunction GrowthFunction::case2() {
  return {2, 0.0, [](double u, double v) {
            return u * v * (loglog_plus(u) + loglog_plus(v)) /
                   (loglog_plus(u) * loglog_plus(v));
          }};
}

GrowthFunction GrowthFunction::case3() {
  return {3, 0.0, [](double u, double v) {
            return u * v * (loglog_plus(u) + loglog_plus(v)) /
                   (log_plus(u) * loglog_plus(v));
          }};
}

GrowthFunction GrowthFunction::case4(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("GrowthFunction::case4: alpha must lie in (0,1)");
  return {4, alpha, [alpha](double u, double v) {
            return std::pow(u, alpha) * v * log_plus(u * v) / log_plus(v);
          }};
}

GrowthFunction GrowthFunction::general(SlowlyVarying L1, SlowlyVarying L2) {
  if (!L1.dominates(L2))
    throw std::invalid_argument(
        "GrowthFunction::general: the first deflator must dominate the second");
  return {5, 0.0, [L1, L2](double u, double v) {
            auto r = [&L1](double x) {
              return L1.log_from_logx(std::log(x)) + loglog_raw(x);
            };
            return u * v * (r(u) + r(v)) / (L1(u) * L2(v));
          }};
}

namespace {

// largest v with G(u, v) <= x, or kDomainMin when the slice is empty
double slice_boundary(const GrowthFunction& G, double u, double x) {
  if (G(u, GrowthFunction::kDomainMin) > x) return GrowthFunction::kDomainMin;
  auto g = [&](double v) { return G(u, v); };
  return solve_increasing(g, x, GrowthFunction::kDomainMin, 1e-7);
}

}  // namespace

double sublevel_measure_slab(const GrowthFunction& G, double x, double u_lo,
                             double u_hi, double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("sublevel_measure: rel_tol must be positive");
  const double lo = std::max(u_lo, GrowthFunction::kDomainMin);
  if (!(u_hi >= lo)) return 0.0;
  if (G(lo, GrowthFunction::kDomainMin) > x) return 0.0;

  // the slice is nonempty exactly on [3, u_max]
  auto edge = [&](double u) { return G(u, GrowthFunction::kDomainMin); };
  double u_max = solve_increasing(edge, x, lo, 1e-9);
  u_max = std::min(u_max, u_hi);
  if (u_max <= lo) return 0.0;

  auto height = [&](double u) {
    return slice_boundary(G, u, x) - GrowthFunction::kDomainMin;
  };
  return integrate_log_midpoint(height, lo, u_max, rel_tol);
}

double sublevel_measure(const GrowthFunction& G, double x, double rel_tol) {
  return sublevel_measure_slab(G, x, GrowthFunction::kDomainMin,
                               std::numeric_limits<double>::infinity(), rel_tol);
}

namespace {

constexpr double kESquared = 7.38905609893065;
constexpr double kEPowE = 15.154262241479262;

}  // namespace

double closed_form_M(int case_k, double x, double alpha) {
  if (!(x >= kESquared))
    throw std::domain_error("closed_form_M: x must be >= e^2");
  double lp = log_plus(x), llp = loglog_plus(x);
  switch (case_k) {
    case 1: return x * lp * lp * lp / llp;
    case 2: return x * lp * llp;
    case 3: return x * lp * lp;
    case 4:
      if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("closed_form_M: case 4 needs alpha in (0,1)");
      return std::pow(x / lp, 1.0 / alpha);
    default:
      throw std::invalid_argument("closed_form_M: case must be 1, 2, 3 or 4");
  }
}

double general_M_upper(const SlowlyVarying& L1, const SlowlyVarying& L2, double x) {
  if (!(x >= kEPowE))
    throw std::domain_error("general_M_upper: x must be >= e^e");
  if (!L1.dominates(L2))
    throw std::invalid_argument(
        "general_M_upper: the first deflator must dominate the second");
  double r = L1.log_from_logx(std::log(x)) + loglog_raw(x);
  double upper_limit = x * L1(x) / r;
  auto f = [&](double u) { return L1(u) / u; };
  double integral = integrate_log_midpoint(f, 3.0, std::max(upper_limit, 3.0), 1e-7);
  return x * L2(x) / r * integral;
}

double moment_function(Regime regime, double x, double alpha) {
  if (!(x > 0.0)) throw std::domain_error("moment_function: x must be positive");
  double lp = log_plus(x), llp = loglog_plus(x);
  switch (regime) {
    case Regime::BothLog: return x * x * lp * lp * lp / llp;
    case Regime::BothLoglog: return x * x * lp * llp;
    case Regime::LogLoglog: return x * x * lp * lp;
    case Regime::PowerLog:
      if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("moment_function: power-log needs alpha in (0,1)");
      return std::pow(x * x / lp, 1.0 / alpha);
    default:
      throw std::invalid_argument(
          "moment_function: defined for the four closed-form regimes");
  }
}

const char* to_string(MomentClass c) {
  switch (c) {
    case MomentClass::Finite: return "finite";
    case MomentClass::Infinite: return "infinite";
    default: return "boundary";
  }
}

MomentClass classify_moment(const LogPerturbedParetoSpec& spec, Regime regime,
                            double alpha) {
  double p, q, beta_required;
  switch (regime) {
    case Regime::BothLog: p = 3, q = -1, beta_required = 2; break;
    case Regime::BothLoglog: p = 1, q = 1, beta_required = 2; break;
    case Regime::LogLoglog: p = 2, q = 0, beta_required = 2; break;
    case Regime::PowerLog:
      if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("classify_moment: power-log needs alpha in (0,1)");
      p = -1.0 / alpha, q = 0, beta_required = 2.0 / alpha;
      break;
    default:
      throw std::invalid_argument(
          "classify_moment: defined for the four closed-form regimes");
  }
  if (std::fabs(spec.beta() - beta_required) > 1e-9)
    throw std::invalid_argument(
        "classify_moment: tail exponent beta must be " + std::to_string(beta_required) +
        " so the weight scales the squared variable exactly");
  double s = spec.gamma() - p;
  double t = spec.delta() - q;
  if (s > 1.0 || (s == 1.0 && t > 1.0)) return MomentClass::Finite;
  return MomentClass::Infinite;
}

namespace {

// tensor-product midpoint integral of tail(sqrt(G)) over [3, H]^2, log axes
double tail_integral_square(const DistributionSpec& dist, const GrowthFunction& G,
                            double H, int panels) {
  double t0 = std::log(GrowthFunction::kDomainMin), t1 = std::log(H);
  double h = (t1 - t0) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    double u = std::exp(t0 + (i + 0.5) * h);
    double row = 0.0;
    for (int j = 0; j < panels; ++j) {
      double v = std::exp(t0 + (j + 0.5) * h);
      row += magnitude_tail(dist, std::sqrt(G(u, v))) * v;
    }
    s += row * u;
  }
  return s * h * h;
}

double tail_integral_adaptive(const DistributionSpec& dist, const GrowthFunction& G,
                              double H) {
  double prev = tail_integral_square(dist, G, H, 128);
  for (int panels = 256; panels <= 2048; panels *= 2) {
    double cur = tail_integral_square(dist, G, H, panels);
    if (std::fabs(cur - prev) <= 5e-3 * std::max({cur, prev, 1e-300})) return cur;
    prev = cur;
  }
  return prev;
}

// piecewise-linear ln M(x^2) against ln x, knots from the numeric measure
class MeasureTable {
 public:
  MeasureTable(const GrowthFunction& G, double x_lo, double x_hi, int knots) {
    double t0 = std::log(x_lo), t1 = std::log(x_hi);
    for (int k = 0; k < knots; ++k) {
      double t = t0 + (t1 - t0) * k / (knots - 1);
      double x = std::exp(t);
      double m = sublevel_measure(G, x * x, 1e-3);
      ts_.push_back(t);
      ys_.push_back(std::log(std::max(m, 1e-300)));
    }
  }

  double value(double x) const {
    double t = std::log(x);
    if (t <= ts_.front()) return std::exp(ys_.front());
    if (t >= ts_.back()) return std::exp(ys_.back());
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    size_t hi = it - ts_.begin(), lo = hi - 1;
    double w = (t - ts_[lo]) / (ts_[hi] - ts_[lo]);
    return std::exp(ys_[lo] * (1 - w) + ys_[hi] * w);
  }

 private:
  std::vector<double> ts_, ys_;
};

}  // namespace

EquivalenceReport equivalence_check(const DistributionSpec& dist,
                                    const GrowthFunction& G, long long max_horizon,
                                    double band) {
  if (!has_closed_tail(dist))
    throw std::invalid_argument(
        "equivalence_check: needs a member with a closed-form tail");
  if (max_horizon < 64)
    throw std::invalid_argument("equivalence_check: horizon too small for 5 levels");

  EquivalenceReport rep;
  for (int k = 4; k >= 0; --k) rep.horizons.push_back(max_horizon >> k);

  const long long H_max = rep.horizons.back();
  const long long lo = static_cast<long long>(GrowthFunction::kDomainMin);

  // one pass over the lattice, binning by the horizon shell of max(m, n)
  std::vector<double> lat_cum(rep.horizons.size(), 0.0);
  {
    for (long long m = lo; m <= H_max; ++m) {
      double um = static_cast<double>(m);
      for (long long n = lo; n <= H_max; ++n) {
        double g = G(um, static_cast<double>(n));
        double t = magnitude_tail(dist, std::sqrt(g));
        long long outer = std::max(m, n);
        for (size_t k = 0; k < rep.horizons.size(); ++k)
          if (outer <= rep.horizons[k]) {
            lat_cum[k] += t;
            break;
          }
      }
    }
    // bins hold exclusive shells; accumulate to running totals
    for (size_t k = 1; k < lat_cum.size(); ++k) lat_cum[k] += lat_cum[k - 1];
  }

  std::vector<double> log_h, lat_shell, int_shell, exp_shell;
  std::vector<double> int_cum;
  for (long long h : rep.horizons)
    int_cum.push_back(tail_integral_adaptive(dist, G, static_cast<double>(h)));

  // expectation probe: E M(X^2) cut at sqrt(G(H,H))
  std::vector<double> x_cuts;
  for (long long h : rep.horizons)
    x_cuts.push_back(std::sqrt(G(static_cast<double>(h), static_cast<double>(h))));
  MeasureTable table(G, x_cuts.front() * 0.99, x_cuts.back() * 1.01, 48);
  auto atoms = magnitude_atoms(dist);
  std::vector<double> exp_cum(x_cuts.size(), 0.0);
  for (size_t k = 1; k < x_cuts.size(); ++k) {
    double a = x_cuts[k - 1], b = x_cuts[k];
    double mass = 0.0;
    if (b > a) {
      auto f = [&](double x) { return table.value(x) * magnitude_density(dist, x); };
      mass = integrate_log_midpoint(f, a, b, 1e-4);
      for (auto [loc, w] : atoms)
        if (loc > a && loc <= b) mass += table.value(loc) * w;
    }
    exp_cum[k] = exp_cum[k - 1] + mass;
  }

  for (size_t k = 1; k < rep.horizons.size(); ++k) {
    log_h.push_back(std::log(static_cast<double>(rep.horizons[k])));
    lat_shell.push_back(std::max(0.0, lat_cum[k] - lat_cum[k - 1]));
    int_shell.push_back(std::max(0.0, int_cum[k] - int_cum[k - 1]));
    exp_shell.push_back(std::max(0.0, exp_cum[k] - exp_cum[k - 1]));
  }

  rep.lattice = classify_shells(log_h, lat_shell, band);
  rep.integral = classify_shells(log_h, int_shell, band);
  rep.expectation = classify_shells(log_h, exp_shell, band);
  rep.agree = rep.lattice.verdict == rep.integral.verdict &&
              rep.integral.verdict == rep.expectation.verdict;
  rep.consensus = rep.lattice.verdict;
  return rep;
}

}  // namespace lsl
