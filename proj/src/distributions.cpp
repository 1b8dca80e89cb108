#include "lsllab/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace lsl {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

// d ln h / d t at t = ln x for h(x) = x^-b (logp x)^-g (llogp x)^-d.
// Clamp kinks sit at t = 1 and t = e.
double raw_slope_t(double t, double b, double g, double d) {
  double s = -b;
  if (t >= 1.0) s -= g / t;
  if (t >= 2.718281828459045235) s -= d / (t * std::log(t));
  return s;
}

}  // namespace

LogPerturbedParetoSpec::LogPerturbedParetoSpec(double beta, double gamma, double delta)
    : beta_(beta), gamma_(gamma), delta_(delta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("LogPerturbedPareto: beta must be positive");

  // Last point where the formula still rises. Rising needs |gamma|+|delta|
  // over t to beat beta, so the search interval is bounded.
  double t_hi = std::max(3.0, (std::fabs(gamma_) + std::fabs(delta_)) / beta_ + 3.0);
  double t_mono = 0.0;
  const int kScan = 4096;
  for (int i = kScan; i >= 1; --i) {
    double t = t_hi * i / kScan;
    if (raw_slope_t(t, beta_, gamma_, delta_) > 0.0) {
      t_mono = t;
      break;
    }
  }
  if (t_mono > 0.0) {
    // refine the sign change just above t_mono
    double lo = t_mono, hi = std::min(t_mono + t_hi / kScan, t_hi);
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (raw_slope_t(mid, beta_, gamma_, delta_) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    t_mono = hi;
  }
  double x_mono = std::max(1.0, std::exp(t_mono));

  x0_ = x_mono;
  if (raw_tail(x_mono) > 1.0) {
    // decreasing beyond x_mono, find the crossing of level 1
    double lo = x_mono, hi = x_mono;
    while (raw_tail(hi) > 1.0) {
      hi *= 2.0;
      if (hi > 1e300)
        throw std::runtime_error("LogPerturbedPareto: tail formula never falls below 1");
    }
    for (int it = 0; it < 200; ++it) {
      double mid = std::sqrt(lo * hi);
      if (raw_tail(mid) > 1.0)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-13 * hi) break;
    }
    x0_ = hi;
  }
  atom_ = 1.0 - std::min(1.0, raw_tail(x0_));
}

double LogPerturbedParetoSpec::raw_tail(double x) const {
  if (!(x >= 1.0)) throw std::domain_error("raw_tail: needs x >= 1");
  double lp = std::max(std::log(x), 1.0);
  double llp = std::max(std::log(lp), 1.0);
  return std::exp(-beta_ * std::log(x) - gamma_ * std::log(lp) - delta_ * std::log(llp));
}

double LogPerturbedParetoSpec::tail(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("tail: needs x >= 0");
  if (x <= x0_) return 1.0;
  return std::min(1.0, raw_tail(x));
}

double LogPerturbedParetoSpec::tail_slope_logx(double x) const {
  return raw_slope_t(std::log(x), beta_, gamma_, delta_);
}

double LogPerturbedParetoSpec::density_magnitude(double x) const {
  if (x <= x0_) return 0.0;
  return -raw_tail(x) * tail_slope_logx(x) / x;
}

double inverse_tail_sample(const LogPerturbedParetoSpec& spec, double u) {
  if (!(u > 0.0) || u > 1.0)
    throw std::invalid_argument("inverse_tail_sample: u must lie in (0, 1]");
  if (u >= spec.raw_tail(std::max(spec.x0(), 1.0))) return spec.x0();

  double lo = std::max(spec.x0(), 1.0), hi = lo;
  int doublings = 0;
  while (spec.raw_tail(hi) > u) {
    hi *= 2.0;
    if (++doublings > 1100 || !std::isfinite(hi))
      throw std::runtime_error("inverse_tail_sample: bracket expansion failed");
  }
  double tlo = std::log(lo), thi = std::log(hi);
  for (int it = 0; it < 200; ++it) {
    double tm = 0.5 * (tlo + thi);
    if (spec.raw_tail(std::exp(tm)) > u)
      tlo = tm;
    else
      thi = tm;
    if (thi - tlo <= 1e-12 * std::max(1.0, std::fabs(thi))) {
      double x = std::exp(0.5 * (tlo + thi));
      return x;
    }
  }
  throw std::runtime_error("inverse_tail_sample: bisection did not converge");
}

const char* distribution_name(const DistributionSpec& d) {
  switch (d.index()) {
    case 0: return "gaussian";
    case 1: return "rademacher";
    case 2: return "uniform";
    case 3: return "student-t";
    default: return "log-pareto";
  }
}

double draw(const DistributionSpec& d, SplitMix64& g) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) {
          return s.sigma * normal_draw(g);
        } else if constexpr (std::is_same_v<T, RademacherSpec>) {
          return g.next_bit() ? 1.0 : -1.0;
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          return s.sigma * kSqrt3 * (2.0 * g.next_open() - 1.0);
        } else if constexpr (std::is_same_v<T, StudentTSpec>) {
          if (!(s.nu > 0.0)) throw std::invalid_argument("student-t: nu must be positive");
          // polar rejection; w^(-2/nu) blows the tail up as nu shrinks
          for (;;) {
            double u = 2.0 * g.next_open() - 1.0;
            double v = 2.0 * g.next_open() - 1.0;
            double w = u * u + v * v;
            if (w >= 1.0 || w == 0.0) continue;
            return u * std::sqrt(s.nu * (std::pow(w, -2.0 / s.nu) - 1.0) / w);
          }
        } else {
          // magnitude first, then an independent fair sign bit
          double u = g.next_open();
          double mag = inverse_tail_sample(s, u);
          return g.next_bit() ? mag : -mag;
        }
      },
      d);
}

bool has_closed_tail(const DistributionSpec& d) {
  return !std::holds_alternative<StudentTSpec>(d);
}

double magnitude_tail(const DistributionSpec& d, double x) {
  if (!(x >= 0.0)) throw std::domain_error("magnitude_tail: needs x >= 0");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) {
          return std::erfc(x / (s.sigma * std::sqrt(2.0)));
        } else if constexpr (std::is_same_v<T, RademacherSpec>) {
          return x < 1.0 ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          double w = s.sigma * kSqrt3;
          return x >= w ? 0.0 : 1.0 - x / w;
        } else if constexpr (std::is_same_v<T, StudentTSpec>) {
          throw std::invalid_argument(
              "magnitude_tail: no closed form for student-t; use the log-pareto family");
        } else {
          return s.tail(x);
        }
      },
      d);
}

bool has_finite_variance(const DistributionSpec& d) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StudentTSpec>) {
          return s.nu > 2.0;
        } else if constexpr (std::is_same_v<T, LogPerturbedParetoSpec>) {
          if (s.beta() > 2.0) return true;
          if (s.beta() < 2.0) return false;
          return s.gamma() > 1.0 || (s.gamma() == 1.0 && s.delta() > 1.0);
        } else {
          return true;
        }
      },
      d);
}

double magnitude_density(const DistributionSpec& d, double x) {
  if (!(x >= 0.0)) throw std::domain_error("magnitude_density: needs x >= 0");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) {
          double z = x / s.sigma;
          return std::sqrt(2.0 / 3.14159265358979323846) / s.sigma *
                 std::exp(-0.5 * z * z);
        } else if constexpr (std::is_same_v<T, RademacherSpec>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          double w = s.sigma * kSqrt3;
          return x < w ? 1.0 / w : 0.0;
        } else if constexpr (std::is_same_v<T, StudentTSpec>) {
          throw std::invalid_argument("magnitude_density: no closed form for student-t");
        } else {
          return s.density_magnitude(x);
        }
      },
      d);
}

std::vector<std::pair<double, double>> magnitude_atoms(const DistributionSpec& d) {
  if (const auto* r = std::get_if<RademacherSpec>(&d)) {
    (void)r;
    return {{1.0, 1.0}};
  }
  if (const auto* p = std::get_if<LogPerturbedParetoSpec>(&d)) {
    if (p->atom_mass() > 0.0) return {{p->x0(), p->atom_mass()}};
  }
  return {};
}

double variance(const DistributionSpec& d) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) {
          return s.sigma * s.sigma;
        } else if constexpr (std::is_same_v<T, RademacherSpec>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          return s.sigma * s.sigma;
        } else if constexpr (std::is_same_v<T, StudentTSpec>) {
          if (s.nu <= 2.0)
            throw std::invalid_argument("variance: infinite for student-t with nu <= 2");
          return s.nu / (s.nu - 2.0);
        } else {
          throw std::invalid_argument(
              "variance: no closed form for the log-pareto family");
        }
      },
      d);
}

}  // namespace lsl
