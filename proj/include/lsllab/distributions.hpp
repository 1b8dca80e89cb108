#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "lsllab/rng.hpp"

namespace lsl {

struct GaussianSpec {
  double sigma = 1.0;
};
struct RademacherSpec {};
// symmetric uniform on [-w, w] with w chosen so the variance is sigma^2
struct UniformSpec {
  double sigma = 1.0;
};
// heavy-tail control; no closed-form two-sided tail is offered here
struct StudentTSpec {
  double nu;
};

// Symmetric law whose magnitude tail is
//   P(|X| > x) = min{1, x^-beta (log x)^-gamma (loglog x)^-delta},
// logs clamped at 1. With negative gamma or delta the raw formula can rise
// before its terminal decay, so the tail is pinned at 1 up to x0, the first
// point from which the formula stays <= 1 and nonincreasing; the leftover
// mass 1 - raw_tail(x0) sits as an atom at x0.
class LogPerturbedParetoSpec {
 public:
  LogPerturbedParetoSpec(double beta, double gamma, double delta);

  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  double x0() const { return x0_; }
  double atom_mass() const { return atom_; }

  double raw_tail(double x) const;       // the unpinned formula, x >= 1
  double tail(double x) const;           // P(|X| > x), x >= 0
  double tail_slope_logx(double x) const;  // d ln(raw_tail) / d ln x
  // density of the continuous part, -dT/dx for x > x0, else 0
  double density_magnitude(double x) const;

 private:
  double beta_, gamma_, delta_;
  double x0_, atom_;
};

// Magnitude with tail probability u: the unique x with tail(x) = u, or x0 for
// u inside the atom. Log-domain bisection to 1e-12 relative, iteration capped.
double inverse_tail_sample(const LogPerturbedParetoSpec& spec, double u);

using DistributionSpec = std::variant<GaussianSpec, RademacherSpec, UniformSpec,
                                      StudentTSpec, LogPerturbedParetoSpec>;

const char* distribution_name(const DistributionSpec& d);

double draw(const DistributionSpec& d, SplitMix64& g);

bool has_closed_tail(const DistributionSpec& d);
// P(|X| > x) for members with a closed-form tail; throws otherwise
double magnitude_tail(const DistributionSpec& d, double x);

bool has_finite_variance(const DistributionSpec& d);
// throws for members without a finite closed-form variance
double variance(const DistributionSpec& d);

// Density of |X| at x for the continuous part; 0 where the law is flat or
// purely atomic there. Throws for members without a closed form.
double magnitude_density(const DistributionSpec& d, double x);
// Atoms of |X| as (location, mass) pairs.
std::vector<std::pair<double, double>> magnitude_atoms(const DistributionSpec& d);

}  // namespace lsl
