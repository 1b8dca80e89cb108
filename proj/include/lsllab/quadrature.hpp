#pragma once

#include <functional>

namespace lsl {

// Composite midpoint rule on a log-transformed axis, refined by doubling the
// panel count until two successive estimates agree to rel_tol. Integrand is
// evaluated on [a, b] with 0 < a < b.
double integrate_log_midpoint(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, int min_panels = 64,
                              int max_panels = 1 << 21);

// Root of g(x) = target for nondecreasing g, bracketed by [lo, hi].
// Bisection on the log axis to rel_tol; throws past max_iter.
double bisect_increasing(const std::function<double(double)>& g, double target,
                         double lo, double hi, double rel_tol = 1e-12,
                         int max_iter = 200);

// Expands hi by doubling until g(hi) >= target (g nondecreasing), then
// delegates to bisect_increasing. Detects non-monotone g during expansion.
double solve_increasing(const std::function<double(double)>& g, double target,
                        double lo, double rel_tol = 1e-12);

}  // namespace lsl
