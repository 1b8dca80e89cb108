#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsllab/distributions.hpp"
#include "lsllab/normalizers.hpp"
#include "lsllab/report.hpp"
#include "lsllab/subsequence.hpp"

namespace lsl {

enum class ExperimentKind {
  Simulate,         // direct window simulation with the truncation split
  SurrogateLimsup,  // running max of scaled Gaussians over a lattice
  Moments,          // finiteness probes against the analytic classifier
  Bounds,           // exponential tail sandwich, optional summability scan
  Subseq,           // gap system, disjointness, block variance bounds
  VerifyAppendix,   // numeric sublevel measure vs closed form
};

const char* to_string(ExperimentKind k);

// Fully validated experiment description. parse_config fills defaults,
// rejects unknown keys (listing the accepted ones), and collects non-fatal
// regime warnings instead of aborting on them.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Simulate;
  std::string canonical_json;  // the accepted document, defaults included

  std::uint64_t seed = 0;

  // window law
  std::string regime = "log-log";
  double alpha = 0.5;  // power-log axis exponent, open interval (0,1)
  double sigma = 1.0;
  std::vector<double> l1{1.0, 0.0};  // general-regime deflator exponents (p, q)
  std::vector<double> l2{1.0, 0.0};

  // distribution
  std::string dist = "gaussian";
  double nu = 3.0;  // student-t
  double tail_beta = 2.0, tail_gamma = 0.0, tail_delta = 0.0;

  // anchors and budgets
  long long m = 0, n = 0;
  long long replicates = 0;
  double eps = 1.0, delta = 0.1, gamma_slack = 0.1, eta = 0.2;
  long long n_count = 1;

  // subsequence family
  std::string family;  // "sqrt-exp" | "over-log" | "power-grid"
  double c = 0.0;
  double family_alpha = 0.5;
  long long budget = 0;
  std::vector<long long> snapshots;
  long long i_max = 0;

  // moment probes and appendix checks
  int growth_case = 1;
  long long horizon = 4096;
  double band = 0.02;
  std::vector<double> x_values;
  double rel_tol = 1e-3;

  // summability scan inside the bounds kind (optional)
  std::vector<double> eps_factors;
  long long sum_horizon = 0;

  std::vector<std::string> warnings;  // e.g. family c outside the proof regime
};

ExperimentConfig parse_config(const std::string& text);

WindowLaw law_from_config(const ExperimentConfig& cfg);
DistributionSpec distribution_from_config(const ExperimentConfig& cfg);
SubseqFamily family_from_config(const ExperimentConfig& cfg);

// Executes the experiment, writing <kind>.csv, <kind>_summary.json and
// <kind>_manifest.json under out_dir. Thread count never changes output
// bytes. The manifest's checks decide the process exit status.
RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                           int threads);

}  // namespace lsl
