#include "lsllab/convergence.hpp"

#include <cmath>
#include <stdexcept>

namespace lsl {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "convergent";
    case Verdict::Divergent: return "divergent";
    default: return "boundary";
  }
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_slope: need two samples of equal length");
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= x.size(); my /= y.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_slope: degenerate abscissae");
  return sxy / sxx;
}

ShellDiagnostic classify_shells(const std::vector<double>& log_horizons,
                                const std::vector<double>& shell_masses,
                                double band) {
  if (log_horizons.size() != shell_masses.size() || log_horizons.empty())
    throw std::invalid_argument("classify_shells: size mismatch");
  ShellDiagnostic d;
  d.log_horizons = log_horizons;
  d.shell_masses = shell_masses;
  d.partial_sums.resize(shell_masses.size());
  double total = 0.0;
  for (size_t i = 0; i < shell_masses.size(); ++i) {
    if (shell_masses[i] < 0.0)
      throw std::invalid_argument("classify_shells: negative shell mass");
    total += shell_masses[i];
    d.partial_sums[i] = total;
  }

  // fully decayed tail: the last shell no longer moves the sum
  size_t k = shell_masses.size();
  d.saturated = total > 0.0 && shell_masses[k - 1] <= 1e-9 * total;
  if (d.saturated || total == 0.0) {
    d.verdict = Verdict::Convergent;
    d.slope = 0.0;
    if (total == 0.0) d.saturated = true;
    return d;
  }

  if (k < 4) throw std::invalid_argument("classify_shells: need at least 4 shells");
  std::vector<double> ly;
  ly.reserve(k);
  for (double m : shell_masses) ly.push_back(std::log(std::max(m, 1e-300)));
  d.slope = linear_slope(log_horizons, ly);
  if (d.slope <= -band)
    d.verdict = Verdict::Convergent;
  else if (d.slope >= band)
    d.verdict = Verdict::Divergent;
  else
    d.verdict = Verdict::Boundary;
  return d;
}

}  // namespace lsl
