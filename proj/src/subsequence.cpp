#include "lsllab/subsequence.hpp"

#include <cmath>
#include <stdexcept>

namespace lsl {

const char* family_name(const SubseqFamily& fam) {
  switch (fam.index()) {
    case 0: return "sqrt-exp";
    case 1: return "over-log";
    default: return "power-grid";
  }
}

namespace {

void check_family(const SubseqFamily& fam) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if (!(f.c > 0.0))
          throw std::invalid_argument("subsequence family: c must be positive");
        if constexpr (std::is_same_v<T, PowerGridFamily>) {
          if (!(f.alpha > 0.0) || !(f.alpha < 1.0))
            throw std::invalid_argument(
                "power-grid family: alpha must lie in the open interval (0,1)");
        }
      },
      fam);
}

}  // namespace

double family_domain_start(const SubseqFamily& fam) {
  check_family(fam);
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SqrtExpFamily>) {
          return std::max(1.0 / f.c, 1.0);
        } else if constexpr (std::is_same_v<T, OverLogFamily>) {
          return std::max(std::log(1.0 / f.c) / f.c, 1.0);
        } else {
          return std::max(std::pow(f.c, f.alpha - 1.0), 1.0);
        }
      },
      fam);
}

long long family_first_index(const SubseqFamily& fam) {
  return static_cast<long long>(std::ceil(family_domain_start(fam) - 1e-9));
}

long long family_first_anchor_index(const SubseqFamily& fam) {
  long long i = family_first_index(fam);
  const double log3 = std::log(3.0);
  while (subseq_log_value(fam, static_cast<double>(i)) < log3) ++i;
  return i;
}

double subseq_log_value(const SubseqFamily& fam, double i) {
  check_family(fam);
  if (i < family_domain_start(fam) - 1e-9)
    throw std::domain_error("subsequence: index below the family's domain start");
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SqrtExpFamily>) {
          return std::sqrt(f.c * i);
        } else if constexpr (std::is_same_v<T, OverLogFamily>) {
          return f.c * i / std::log(i + 1.0);
        } else {
          return std::log(f.c) + std::log(i) / (1.0 - f.alpha);
        }
      },
      fam);
}

double subseq_value(const SubseqFamily& fam, long long i) {
  return std::exp(subseq_log_value(fam, static_cast<double>(i)));
}

double coupled_c(const SubseqFamily& prototype, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("coupled_c: eta must be positive");
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SqrtExpFamily>) {
          return eta * eta;
        } else if constexpr (std::is_same_v<T, OverLogFamily>) {
          return eta * eta / 2.0;
        } else {
          if (!(f.alpha > 0.0) || !(f.alpha < 1.0))
            throw std::invalid_argument(
                "coupled_c: power-grid alpha must lie in the open interval (0,1)");
          double om = 1.0 - f.alpha;
          return std::pow(om * om * eta * eta, 1.0 / om);
        }
      },
      prototype);
}

namespace {

// axis rules per coordinate for the gap system
std::pair<AxisRule, AxisRule> gap_axes(const SubseqFamily& fam, const AxisRule& rule) {
  if (const auto* pg = std::get_if<PowerGridFamily>(&fam))
    return {AxisRule{PowerRule{pg->alpha}}, rule};
  return {rule, rule};
}

}  // namespace

bool GapReport::all_ok() const {
  for (const auto& r : rows)
    if (!r.ok()) return false;
  return true;
}

GapReport gap_report(const SubseqFamily& fam, const AxisRule& rule, double eta,
                     long long i_lo, long long i_hi) {
  check_family(fam);
  if (!(eta > 0.0)) throw std::invalid_argument("gap_report: eta must be positive");
  if (i_lo > i_hi) throw std::invalid_argument("gap_report: descending index range");
  double c_expected = coupled_c(fam, eta);
  double c_actual = std::visit([](const auto& f) { return f.c; }, fam);
  if (std::fabs(c_actual - c_expected) > 1e-9 * std::max(1.0, c_expected))
    throw std::invalid_argument(
        "gap_report: family c must equal the eta coupling (" +
        std::to_string(c_expected) + " for this family)");
  long long start = std::max(i_lo, family_first_index(fam));

  auto [rule1, rule2] = gap_axes(fam, rule);
  GapReport rep;
  rep.eta = eta;
  rep.c = c_actual;
  rep.rows[0].name = "gap-axis1";
  rep.rows[1].name = "gap-axis2";
  rep.rows[2].name = "ratio-axis1";
  rep.rows[3].name = "ratio-axis2";

  double log_eta2 = std::log(eta * eta);
  double log_ratio_cap = std::log1p(2.0 * eta * eta);
  for (long long i = start; i <= i_hi; ++i) {
    double lm = subseq_log_value(fam, static_cast<double>(i));
    double lm1 = subseq_log_value(fam, static_cast<double>(i + 1));
    double dl = lm1 - lm;
    // ln(m_{i+1} - m_i) = ln m_i + ln(e^dl - 1)
    double log_gap = lm + std::log(std::expm1(dl));
    for (int axis = 0; axis < 2; ++axis) {
      const AxisRule& r = axis == 0 ? rule1 : rule2;
      bool gap_ok = log_gap <= log_eta2 + axis_log_length_from_logm(r, lm);
      bool ratio_ok = axis_log_length_from_logm(r, lm1) -
                          axis_log_length_from_logm(r, lm) <=
                      log_ratio_cap;
      for (int which = 0; which < 2; ++which) {
        GapInequality& row = rep.rows[axis + 2 * which];
        bool ok = which == 0 ? gap_ok : ratio_ok;
        if (ok) {
          if (row.first_hold < 0) row.first_hold = i;
        } else if (row.first_hold >= 0) {
          row.later_violations.push_back(i);
        }
      }
    }
  }
  return rep;
}

DisjointnessResult disjointness_threshold(const SubseqFamily& fam, const AxisRule& rule,
                                          long long i_max, bool integerized) {
  check_family(fam);
  DisjointnessResult res;
  res.first_checked = family_first_index(fam);
  res.i_max = i_max;
  if (res.first_checked >= i_max)
    throw std::invalid_argument("disjointness_threshold: i_max below the family domain");

  long long last_violation = res.first_checked - 1;
  for (long long i = res.first_checked; i < i_max; ++i) {
    double lm = subseq_log_value(fam, static_cast<double>(i));
    double lm1 = subseq_log_value(fam, static_cast<double>(i + 1));
    bool disjoint;
    if (integerized) {
      double m = std::floor(std::exp(lm));
      double m1 = std::floor(std::exp(lm1));
      if (!std::isfinite(m) || !std::isfinite(m1))
        throw std::overflow_error(
            "disjointness_threshold: integerized mode needs representable values");
      if (m < 3.0)
        throw std::domain_error(
            "disjointness_threshold: integerized mode needs anchors >= 3");
      disjoint = m + std::floor(axis_length_real(rule, m)) < m1;
    } else {
      double la = axis_log_length_from_logm(rule, lm);
      disjoint = lm + std::log1p(std::exp(la - lm)) < lm1;
    }
    if (!disjoint) {
      last_violation = i;
      ++res.violations;
    }
  }
  if (last_violation >= i_max - 1) {
    res.found = false;  // violations persist to the end of the scan
    return res;
  }
  res.found = true;
  res.threshold = std::max(res.first_checked, last_violation + 1);
  return res;
}

bool VarianceBoundReport::all_ok() const {
  for (const auto& r : rows)
    if (!r.ok()) return false;
  return true;
}

VarianceBoundReport block_variance_bounds_at(const WindowLaw& law, double eta,
                                             double m_i, double m_ip1, double n_j,
                                             double n_jp1) {
  if (!(eta > 0.0)) throw std::invalid_argument("block_variance_bounds: eta must be positive");
  if (!(m_ip1 >= m_i) || !(n_jp1 >= n_j))
    throw std::invalid_argument("block_variance_bounds: anchors must be nondecreasing");
  Regime regime = classify_regime(law);

  double e2 = eta * eta;
  double c2, c3, c4;  // slack factors of rows 2..4, row 1 is always eta^4
  switch (regime) {
    case Regime::BothLog:
      c2 = c3 = (1 + 3 * e2) * e2;
      c4 = (1 + 3 * e2) * (1 + 3 * e2);
      break;
    case Regime::BothLoglog:
      c2 = c3 = (1 + 2 * e2) * e2;
      c4 = (1 + 2 * e2) * (1 + 2 * e2);
      break;
    case Regime::PowerLog:
      c2 = (1 + e2) * e2;
      c3 = e2 * (1 + 2 * e2);
      c4 = (1 + 2 * e2) * (1 + 2 * e2);
      break;
    default:
      throw std::invalid_argument(
          "block_variance_bounds: supported in the log-log, loglog-loglog and "
          "power-log regimes");
  }

  double a1 = axis_length_real(law.axis1, m_i);
  double a2 = axis_length_real(law.axis2, n_j);
  double a = a1 * a2;
  double a1_next = axis_length_real(law.axis1, m_ip1);
  double a2_next = axis_length_real(law.axis2, n_jp1);
  double s2 = law.sigma * law.sigma;

  double w_gap = m_ip1 - m_i, h_gap = n_jp1 - n_j;
  double w_full = m_ip1 + a1_next - m_i, h_full = n_jp1 + a2_next - n_j;

  VarianceBoundReport rep;
  rep.rows[0] = {"gap x gap", s2 * w_gap * h_gap, s2 * e2 * e2 * a};
  rep.rows[1] = {"full x gap", s2 * w_full * h_gap, s2 * c2 * a};
  rep.rows[2] = {"gap x full", s2 * w_gap * h_full, s2 * c3 * a};
  rep.rows[3] = {"full x full", s2 * w_full * h_full, s2 * c4 * a};
  return rep;
}

VarianceBoundReport block_variance_bounds(const WindowLaw& law, const SubseqFamily& fam,
                                          double eta, long long i, long long j) {
  check_family(fam);
  double m_i = subseq_value(fam, i);
  double m_ip1 = subseq_value(fam, i + 1);
  double n_j = subseq_value(fam, j);
  double n_jp1 = subseq_value(fam, j + 1);
  if (!std::isfinite(m_ip1) || !std::isfinite(n_jp1))
    throw std::overflow_error("block_variance_bounds: anchors overflow at these indices");
  return block_variance_bounds_at(law, eta, m_i, m_ip1, n_j, n_jp1);
}

}  // namespace lsl
