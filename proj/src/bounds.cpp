#include "lsllab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "lsllab/field.hpp"
#include "lsllab/quadrature.hpp"
#include "lsllab/rng.hpp"

namespace lsl {

void validate(const BoundParams& p) {
  if (!(p.eps > 0.0)) throw std::invalid_argument("BoundParams: eps must be positive");
  if (!(p.delta > 0.0) || !(p.delta < 1.0))
    throw std::invalid_argument("BoundParams: delta must lie in (0,1)");
  if (!(p.gamma_slack > 0.0))
    throw std::invalid_argument("BoundParams: gamma_slack must be positive");
  if (!(p.sigma > 0.0)) throw std::invalid_argument("BoundParams: sigma must be positive");
  if (p.n_count < 1) throw std::invalid_argument("BoundParams: N must be at least 1");
  if (!(p.eta > 0.0)) throw std::invalid_argument("BoundParams: eta must be positive");
  if (static_cast<double>(p.n_count) * p.delta + 1e-12 < p.eta)
    throw std::invalid_argument("BoundParams: need the coupling N*delta >= eta");
}

long long min_overshoot_count(double eta, double delta) {
  if (!(eta > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("min_overshoot_count: eta and delta must be positive");
  double q = eta / delta;
  double r = std::round(q);
  // eta/delta often hits an integer only up to rounding (0.3/0.1 = 3.0000...4)
  long long n = (std::fabs(q - r) <= 1e-9 * std::max(1.0, q))
                    ? static_cast<long long>(r)
                    : static_cast<long long>(std::ceil(q));
  return std::max(n, 1ll);
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double kolmogorov_upper(const BoundParams& p, double d) {
  validate(p);
  if (!(d > 0.0)) throw std::domain_error("kolmogorov_upper: d must be positive");
  double om = 1.0 - p.delta;
  return std::exp(-p.eps * p.eps * om * om * om * d / (p.sigma * p.sigma));
}

double kolmogorov_lower(const BoundParams& p, double d) {
  validate(p);
  if (!(d > 0.0)) throw std::domain_error("kolmogorov_lower: d must be positive");
  double op = 1.0 + p.delta;
  return std::exp(-p.eps * p.eps * op * op * (1.0 + p.gamma_slack) * d /
                  (p.sigma * p.sigma * (1.0 - p.delta)));
}

double summability_threshold(double sigma, double delta) {
  if (!(sigma > 0.0) || !(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("summability_threshold: need sigma > 0, delta in (0,1)");
  return sigma * std::pow(1.0 - delta, -1.5);
}

namespace {

// b with cells * P(|X| > b) = kInactiveMass for X ~ N(0, sigma^2); beyond it
// truncation fires with negligible probability over the whole window
constexpr double kInactiveMass = 1e-6;

double inactive_truncation_level(double sigma, long long cells) {
  auto g = [&](double b) {
    return -std::log(2.0 * normal_upper_tail(b / sigma) * static_cast<double>(cells));
  };
  return bisect_increasing(g, -std::log(kInactiveMass), 0.1 * sigma, 40.0 * sigma,
                           1e-12);
}

long long count_exceedances(double sigma, double b, double threshold,
                            long long cells, std::uint64_t seed, long long r_lo,
                            long long r_hi) {
  long long hits = 0;
  for (long long r = r_lo; r < r_hi; ++r) {
    SplitMix64 g(stream_key(seed, static_cast<std::uint64_t>(r), 0x7a11u));
    double sum = 0.0;
    for (long long k = 0; k < cells; ++k) {
      double x = sigma * normal_draw(g);
      if (std::fabs(x) <= b) sum += x;
    }
    if (sum > threshold) ++hits;
  }
  return hits;
}

}  // namespace

SandwichReport tprime_tail_sandwich(const WindowLaw& law, long long m, long long n,
                                    const BoundParams& p, double sigma,
                                    std::uint64_t seed, long long replicates,
                                    int threads) {
  validate(p);
  if (!(sigma > 0.0)) throw std::invalid_argument("tprime_tail_sandwich: sigma must be positive");
  if (replicates < 1) throw std::invalid_argument("tprime_tail_sandwich: need replicates >= 1");
  if (threads < 1) throw std::invalid_argument("tprime_tail_sandwich: need threads >= 1");

  SandwichReport rep;
  NormalizerBundle nb = rate_bundle(law, m, n);
  WindowRect rect = window_rect(law, m, n);
  rep.d = nb.rate;
  rep.f = nb.f;
  rep.cells = rect.cells();
  rep.b = inactive_truncation_level(sigma, rep.cells);
  rep.upper = kolmogorov_upper(p, rep.d);
  rep.lower = kolmogorov_lower(p, rep.d);
  rep.replicates = replicates;

  double threshold = p.eps * std::sqrt(2.0 * rep.f);
  rep.exact_tail =
      normal_upper_tail(threshold / (sigma * std::sqrt(static_cast<double>(rep.cells))));

  // shape scan in d alone: exact tail vs both bounds on a fixed grid
  auto exact_shape = [&](double d) {
    return normal_upper_tail(p.eps * std::sqrt(2.0 * d) / sigma);
  };
  const double d_step = 0.25, d_max = 60.0;
  const int n_grid = static_cast<int>(d_max / d_step);
  rep.d0 = std::numeric_limits<double>::infinity();
  for (int k = n_grid; k >= 1; --k) {
    double d = k * d_step;
    if (exact_shape(d) <= kolmogorov_upper(p, d))
      rep.d0 = d;
    else
      break;
  }
  // longest run where the lower bound sits below the exact tail
  double best_lo = 0, best_hi = 0, run_lo = 0;
  int best_len = 0, run_len = 0;
  for (int k = 1; k <= n_grid; ++k) {
    double d = k * d_step;
    if (kolmogorov_lower(p, d) <= exact_shape(d)) {
      if (run_len == 0) run_lo = d;
      ++run_len;
      if (run_len >= best_len) {
        best_len = run_len;
        best_lo = run_lo;
        best_hi = d;
      }
    } else {
      run_len = 0;
    }
  }
  rep.lower_lo = best_lo;
  rep.lower_hi = best_hi;

  rep.binding = rep.d >= rep.d0;
  rep.within_upper = rep.binding && rep.exact_tail <= rep.upper;
  rep.above_lower = rep.d >= rep.lower_lo && rep.d <= rep.lower_hi &&
                    rep.lower <= rep.exact_tail;
  rep.status = rep.binding ? "ok" : "bounds not yet binding";

  long long hits = 0;
  if (threads == 1) {
    hits = count_exceedances(sigma, rep.b, threshold, rep.cells, seed, 0,
                             replicates);
  } else {
    std::vector<long long> partial(threads, 0);
    std::vector<std::thread> pool;
    long long chunk = (replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long long lo = t * chunk, hi = std::min<long long>(replicates, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, t, lo, hi] {
        partial[t] = count_exceedances(sigma, rep.b, threshold, rep.cells, seed,
                                       lo, hi);
      });
    }
    for (auto& th : pool) th.join();
    for (long long h : partial) hits += h;
  }
  rep.mc_tail = static_cast<double>(hits) / static_cast<double>(replicates);
  rep.mc_se = std::sqrt(rep.exact_tail * (1.0 - rep.exact_tail) /
                        static_cast<double>(replicates));
  rep.mc_within_3se = std::fabs(rep.mc_tail - rep.exact_tail) <= 3.0 * rep.mc_se;
  return rep;
}

MiddleBandBound tdoubleprime_bound(const WindowLaw& law, long long m, long long n,
                                   long long N, double moment_value, double H_at_b) {
  if (N < 1) throw std::invalid_argument("tdoubleprime_bound: need N >= 1");
  if (!(moment_value >= 0.0))
    throw std::invalid_argument("tdoubleprime_bound: moment value must be nonnegative");
  if (!(H_at_b > 0.0))
    throw std::invalid_argument("tdoubleprime_bound: H(b) must be positive");
  NormalizerBundle nb = rate_bundle(law, m, n);
  MiddleBandBound out;
  out.shape = std::pow(nb.a1 * nb.a2 * moment_value / H_at_b,
                       static_cast<double>(N));
  double lm = std::log(static_cast<double>(m)), ln = std::log(static_cast<double>(n));
  double base = (std::log(lm) + std::log(ln)) * std::log(lm + ln) /
                ((lm + ln) * (lm + ln) * (lm + ln));
  out.simplified = std::pow(base, static_cast<double>(N));
  return out;
}

ShellDiagnostic summability_diagnostic(
    const std::function<double(long long, long long)>& term, long long i_start,
    long long j_start, long long max_horizon, double band) {
  if (i_start < 1 || j_start < 1)
    throw std::invalid_argument("summability_diagnostic: starts must be >= 1");
  long long h0 = max_horizon >> 4;
  if (h0 <= std::max(i_start, j_start))
    throw std::invalid_argument(
        "summability_diagnostic: horizon too small for 5 dyadic levels above the starts");

  std::vector<long long> horizons;
  for (int k = 4; k >= 0; --k) horizons.push_back(max_horizon >> k);

  std::vector<double> bins(horizons.size(), 0.0);
  for (long long i = i_start; i <= max_horizon; ++i)
    for (long long j = j_start; j <= max_horizon; ++j) {
      long long outer = std::max(i, j);
      for (size_t k = 0; k < horizons.size(); ++k)
        if (outer <= horizons[k]) {
          bins[k] += term(i, j);
          break;
        }
    }

  std::vector<double> log_h, shells;
  for (size_t k = 1; k < horizons.size(); ++k) {
    log_h.push_back(std::log(static_cast<double>(horizons[k])));
    shells.push_back(std::max(0.0, bins[k]));
  }
  return classify_shells(log_h, shells, band);
}

}  // namespace lsl
