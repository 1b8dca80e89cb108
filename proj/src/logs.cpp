#include "lsllab/logs.hpp"

#include <cmath>

namespace lsl {

double log_plus(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_plus: argument must be positive");
  return std::max(std::log(x), 1.0);
}

double loglog_plus(double x) {
  return std::max(std::log(log_plus(x)), 1.0);
}

double loglog_raw(double x) {
  if (!(x >= 3.0)) throw std::domain_error("loglog_raw: argument must be >= 3");
  return std::log(std::log(x));
}

SlowlyVarying::SlowlyVarying(double log_exp, double loglog_exp)
    : p_(log_exp), q_(loglog_exp) {
  if (p_ < 0.0 || q_ < 0.0 || (p_ == 0.0 && q_ == 0.0))
    throw std::invalid_argument(
        "SlowlyVarying: exponents must be nonnegative and not both zero");
}

double SlowlyVarying::operator()(double x) const {
  double lp = log_plus(x);
  double llp = std::max(std::log(lp), 1.0);
  return std::pow(lp, p_) * std::pow(llp, q_);
}

double SlowlyVarying::log_from_logx(double log_x) const {
  double lp = std::max(log_x, 1.0);
  double llp = std::max(std::log(lp), 1.0);
  return p_ * std::log(lp) + q_ * std::log(llp);
}

bool SlowlyVarying::dominates(const SlowlyVarying& other) const {
  if (p_ > other.p_) return true;
  if (p_ == other.p_) return q_ >= other.q_;
  return false;
}

}  // namespace lsl
