#pragma once

#include <stdexcept>

namespace lsl {

// Clamped logarithms. Every slowly varying deflator and every moment-side
// weight uses these, so deflators stay >= 1 and weights stay positive on
// the whole half line.
double log_plus(double x);     // max{ln x, 1}, requires x > 0
double loglog_plus(double x);  // max{ln(log_plus(x)), 1}

// Unclamped iterated log. Requires x >= 3 so the value is positive.
double loglog_raw(double x);

// L(x) = (log x)^p (loglog x)^q with clamped factors. Nondecreasing and
// >= 1 everywhere; p, q >= 0 and not both zero.
class SlowlyVarying {
 public:
  SlowlyVarying(double log_exp, double loglog_exp);

  double operator()(double x) const;
  // ln L given ln x; safe when x itself would overflow
  double log_from_logx(double log_x) const;

  double log_exp() const { return p_; }
  double loglog_exp() const { return q_; }

  static SlowlyVarying log_deflator() { return {1.0, 0.0}; }
  static SlowlyVarying loglog_deflator() { return {0.0, 1.0}; }

  // pointwise comparison on [x, inf) holds iff exponents dominate
  bool dominates(const SlowlyVarying& other) const;

 private:
  double p_, q_;
};

}  // namespace lsl
