#include "lsllab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace lsl {

double integrate_log_midpoint(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, int min_panels,
                              int max_panels) {
  if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("integrate_log_midpoint: need 0 < a <= b");
  if (a == b) return 0.0;
  double ta = std::log(a), tb = std::log(b);
  auto estimate = [&](int n) {
    double h = (tb - ta) / n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      double t = ta + (k + 0.5) * h;
      double x = std::exp(t);
      s += f(x) * x;  // du = x dt
    }
    return s * h;
  };
  double prev = estimate(min_panels);
  for (int n = 2 * min_panels; n <= max_panels; n *= 2) {
    double cur = estimate(n);
    double scale = std::max({std::fabs(cur), std::fabs(prev), 1e-300});
    if (std::fabs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  throw std::runtime_error("integrate_log_midpoint: no convergence at max panel count");
}

double bisect_increasing(const std::function<double(double)>& g, double target,
                         double lo, double hi, double rel_tol, int max_iter) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bisect_increasing: bad bracket");
  double glo = g(lo), ghi = g(hi);
  if (glo > target || ghi < target)
    throw std::invalid_argument("bisect_increasing: target not bracketed");
  double tlo = std::log(lo), thi = std::log(hi);
  for (int it = 0; it < max_iter; ++it) {
    double tm = 0.5 * (tlo + thi);
    double xm = std::exp(tm);
    if (g(xm) < target)
      tlo = tm;
    else
      thi = tm;
    if (thi - tlo <= rel_tol) return std::exp(0.5 * (tlo + thi));
  }
  throw std::runtime_error("bisect_increasing: no convergence within iteration cap");
}

double solve_increasing(const std::function<double(double)>& g, double target,
                        double lo, double rel_tol) {
  double hi = lo;
  double prev = g(lo);
  if (prev >= target) return lo;
  for (int k = 0; k < 1100; ++k) {
    hi *= 2.0;
    double cur = g(hi);
    if (cur < prev * (1.0 - 1e-9))
      throw std::runtime_error("solve_increasing: function decreased during bracket expansion");
    if (cur >= target) return bisect_increasing(g, target, hi / 2.0, hi, rel_tol);
    prev = cur;
  }
  throw std::runtime_error("solve_increasing: target unreachable");
}

}  // namespace lsl
