#pragma once

#include <cstddef>
#include <vector>

namespace lsl {

enum class Verdict { Convergent, Divergent, Boundary };

const char* to_string(Verdict v);

// Least-squares slope of y against x.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ShellDiagnostic {
  Verdict verdict;
  double slope;          // d ln(shell mass) / d ln(horizon)
  bool saturated;        // trailing shells vanished relative to the total
  std::vector<double> log_horizons;
  std::vector<double> shell_masses;
  std::vector<double> partial_sums;
};

// Classifies a nonnegative series from its masses over log-spaced horizon
// shells. Decaying shells (slope <= -band) mean the tail is summable,
// growing ones (slope >= band) mean it is not; slopes inside the band are
// reported as Boundary rather than guessed. Needs at least 4 shells unless
// the sum has already saturated.
ShellDiagnostic classify_shells(const std::vector<double>& log_horizons,
                                const std::vector<double>& shell_masses,
                                double band = 0.02);

}  // namespace lsl
