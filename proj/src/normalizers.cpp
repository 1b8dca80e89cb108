#include "lsllab/normalizers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsl {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("power rule: alpha must lie in the open interval (0,1)");
}

void check_anchor(double x, const char* who) {
  if (!(x >= 3.0)) throw std::domain_error(std::string(who) + ": anchor must be >= 3");
}

}  // namespace

WindowLaw log_log_law(double sigma) {
  return {LogFractionRule{}, LogFractionRule{}, sigma};
}
WindowLaw loglog_loglog_law(double sigma) {
  return {LogLogFractionRule{}, LogLogFractionRule{}, sigma};
}
WindowLaw log_loglog_law(double sigma) {
  return {LogFractionRule{}, LogLogFractionRule{}, sigma};
}
WindowLaw power_log_law(double alpha, double sigma) {
  check_alpha(alpha);
  return {PowerRule{alpha}, LogFractionRule{}, sigma};
}
WindowLaw general_law(SlowlyVarying L1, SlowlyVarying L2, double sigma) {
  if (!L1.dominates(L2))
    throw std::invalid_argument(
        "general_law: the first deflator must dominate the second");
  return {GeneralSVRule{L1}, GeneralSVRule{L2}, sigma};
}
WindowLaw power_power_law(double alpha1, double alpha2, double sigma) {
  check_alpha(alpha1);
  check_alpha(alpha2);
  return {PowerRule{alpha1}, PowerRule{alpha2}, sigma};
}

Regime classify_regime(const WindowLaw& law) {
  const AxisRule& a = law.axis1;
  const AxisRule& b = law.axis2;
  if (std::holds_alternative<LogFractionRule>(a) && std::holds_alternative<LogFractionRule>(b))
    return Regime::BothLog;
  if (std::holds_alternative<LogLogFractionRule>(a) && std::holds_alternative<LogLogFractionRule>(b))
    return Regime::BothLoglog;
  if (std::holds_alternative<LogFractionRule>(a) && std::holds_alternative<LogLogFractionRule>(b))
    return Regime::LogLoglog;
  if (std::holds_alternative<PowerRule>(a) && std::holds_alternative<LogFractionRule>(b))
    return Regime::PowerLog;
  if (std::holds_alternative<GeneralSVRule>(a) && std::holds_alternative<GeneralSVRule>(b)) {
    if (!std::get<GeneralSVRule>(a).L.dominates(std::get<GeneralSVRule>(b).L))
      throw std::invalid_argument(
          "classify_regime: general pair needs the first deflator to dominate the second");
    return Regime::General;
  }
  if (std::holds_alternative<PowerRule>(a) && std::holds_alternative<PowerRule>(b))
    return Regime::PowerPower;
  throw std::invalid_argument(
      "classify_regime: unsupported axis pairing; supported pairs are "
      "(log,log), (loglog,loglog), (log,loglog), (power,log), (general,general), "
      "(power,power)");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::BothLog: return "log-log";
    case Regime::BothLoglog: return "loglog-loglog";
    case Regime::LogLoglog: return "log-loglog";
    case Regime::PowerLog: return "power-log";
    case Regime::General: return "general";
    default: return "power-power";
  }
}

double axis_length_real(const AxisRule& rule, double x) {
  check_anchor(x, "axis_length");
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PowerRule>) {
          check_alpha(r.alpha);
          return std::pow(x, r.alpha);
        } else if constexpr (std::is_same_v<T, LogFractionRule>) {
          return x / log_plus(x);
        } else if constexpr (std::is_same_v<T, LogLogFractionRule>) {
          return x / loglog_plus(x);
        } else {
          return x / r.L(x);
        }
      },
      rule);
}

double axis_length(const AxisRule& rule, long long n) {
  if (n < 3) throw std::domain_error("axis_length: anchor must be >= 3");
  return axis_length_real(rule, static_cast<double>(n));
}

double deflator_log_from_logm(const AxisRule& rule, double log_m) {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PowerRule>) {
          throw std::invalid_argument("deflator_log_from_logm: power rule has no deflator");
        } else if constexpr (std::is_same_v<T, LogFractionRule>) {
          return SlowlyVarying::log_deflator().log_from_logx(log_m);
        } else if constexpr (std::is_same_v<T, LogLogFractionRule>) {
          return SlowlyVarying::loglog_deflator().log_from_logx(log_m);
        } else {
          return r.L.log_from_logx(log_m);
        }
      },
      rule);
}

double axis_log_length_from_logm(const AxisRule& rule, double log_m) {
  if (const auto* p = std::get_if<PowerRule>(&rule)) {
    check_alpha(p->alpha);
    return p->alpha * log_m;
  }
  return log_m - deflator_log_from_logm(rule, log_m);
}

double rate_coordinate_real(const WindowLaw& law, double x) {
  check_anchor(x, "rate_coordinate");
  switch (classify_regime(law)) {
    case Regime::BothLog:
    case Regime::LogLoglog:
      return 2.0 * loglog_raw(x);
    case Regime::BothLoglog:
      return loglog_raw(x);
    case Regime::PowerLog:
      return (1.0 - std::get<PowerRule>(law.axis1).alpha) * std::log(x);
    case Regime::General: {
      // ln(L1(x) ln x), the dominating per-axis rate
      const SlowlyVarying& L1 = std::get<GeneralSVRule>(law.axis1).L;
      return L1.log_from_logx(std::log(x)) + loglog_raw(x);
    }
    default:
      throw std::invalid_argument(
          "rate_coordinate: the power-power pairing only carries a reference constant");
  }
}

double rate_real(const WindowLaw& law, double m, double n) {
  return rate_coordinate_real(law, m) + rate_coordinate_real(law, n);
}

NormalizerBundle rate_bundle(const WindowLaw& law, long long m, long long n) {
  if (m < 3 || n < 3) throw std::domain_error("rate_bundle: anchors must be >= 3");
  NormalizerBundle b;
  b.m = m;
  b.n = n;
  b.a1 = axis_length(law.axis1, m);
  b.a2 = axis_length(law.axis2, n);
  b.area = b.a1 * b.a2;
  b.rate_m = rate_coordinate_real(law, static_cast<double>(m));
  b.rate_n = rate_coordinate_real(law, static_cast<double>(n));
  b.rate = b.rate_m + b.rate_n;
  b.f = b.area * b.rate;
  return b;
}

double normalizer_f_1d(const AxisRule& rule, long long n) {
  if (n < 3) throw std::domain_error("normalizer_f_1d: anchor must be >= 3");
  if (std::holds_alternative<PowerRule>(rule))
    throw std::invalid_argument("normalizer_f_1d: defined for the n/L(n) rules only");
  double x = static_cast<double>(n);
  double a = axis_length_real(rule, x);
  // d_n = ln L(n) + loglog n, iterated-log term clamped at 1
  double d = deflator_log_from_logm(rule, std::log(x)) + loglog_plus(x);
  return std::min(a * d, x);
}

double truncation_level(const WindowLaw& law, long long m, long long n,
                        double eps, double delta) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation_level: eps must be positive");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("truncation_level: delta must lie in (0,1)");
  NormalizerBundle b = rate_bundle(law, m, n);
  return (law.sigma * delta / eps) * std::sqrt(b.area / b.rate);
}

double lsl_constant(const WindowLaw& law) {
  if (!(law.sigma > 0.0)) throw std::invalid_argument("lsl_constant: sigma must be positive");
  if (classify_regime(law) == Regime::PowerPower) {
    double a1 = std::get<PowerRule>(law.axis1).alpha;
    double a2 = std::get<PowerRule>(law.axis2).alpha;
    return law.sigma * std::sqrt(1.0 - std::min(a1, a2));
  }
  return law.sigma;
}

}  // namespace lsl
