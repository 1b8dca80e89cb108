#include "lsllab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "lsllab/bounds.hpp"
#include "lsllab/field.hpp"
#include "lsllab/moments.hpp"
#include "lsllab/quadrature.hpp"

namespace lsl {

using nlohmann::json;

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::SurrogateLimsup: return "surrogate-limsup";
    case ExperimentKind::Moments: return "moments";
    case ExperimentKind::Bounds: return "bounds";
    case ExperimentKind::Subseq: return "subseq";
    default: return "verify-appendix";
  }
}

namespace {

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "simulate") return ExperimentKind::Simulate;
  if (name == "surrogate-limsup") return ExperimentKind::SurrogateLimsup;
  if (name == "moments") return ExperimentKind::Moments;
  if (name == "bounds") return ExperimentKind::Bounds;
  if (name == "subseq") return ExperimentKind::Subseq;
  if (name == "verify-appendix") return ExperimentKind::VerifyAppendix;
  throw std::invalid_argument(
      "unknown kind \"" + name +
      "\"; accepted: simulate, surrogate-limsup, moments, bounds, subseq, "
      "verify-appendix");
}

const std::set<std::string>& accepted_keys(ExperimentKind k) {
  static const std::set<std::string> simulate = {
      "kind", "seed", "regime", "alpha", "sigma", "l1", "l2", "dist", "nu",
      "tail_beta", "tail_gamma", "tail_delta", "m", "n", "replicates", "eps",
      "delta"};
  static const std::set<std::string> surrogate = {
      "kind", "seed", "regime", "alpha", "sigma", "l1", "l2",
      "family", "c", "family_alpha", "budget", "snapshots"};
  static const std::set<std::string> moments = {
      "kind", "growth_case", "alpha", "tail_beta", "tail_gamma", "tail_delta",
      "horizon", "band"};
  static const std::set<std::string> bounds = {
      "kind", "seed", "regime", "alpha", "sigma", "l1", "l2", "m", "n", "eps",
      "delta", "gamma_slack", "eta", "n_count", "replicates", "family", "c",
      "family_alpha", "eps_factors", "sum_horizon"};
  static const std::set<std::string> subseq = {
      "kind", "regime", "alpha", "sigma", "family", "c", "family_alpha", "eta",
      "i_max"};
  static const std::set<std::string> appendix = {"kind", "growth_case", "alpha",
                                                 "x_values", "rel_tol"};
  switch (k) {
    case ExperimentKind::Simulate: return simulate;
    case ExperimentKind::SurrogateLimsup: return surrogate;
    case ExperimentKind::Moments: return moments;
    case ExperimentKind::Bounds: return bounds;
    case ExperimentKind::Subseq: return subseq;
    default: return appendix;
  }
}

std::string keys_for_message(const std::set<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) {
    if (!out.empty()) out += ", ";
    out += k;
  }
  return out;
}

double require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  return v;
}

double require_open_unit(double v, const char* name) {
  if (!(v > 0.0) || !(v < 1.0))
    throw std::invalid_argument(std::string(name) +
                                " must lie strictly inside the open interval (0,1)");
  return v;
}

void check_regime_name(const std::string& r) {
  static const std::set<std::string> names = {"log-log", "loglog-loglog",
                                              "log-loglog", "power-log", "general"};
  if (!names.count(r))
    throw std::invalid_argument("unknown regime \"" + r +
                                "\"; accepted: " + keys_for_message(names));
}

void check_family_name(const std::string& f) {
  static const std::set<std::string> names = {"sqrt-exp", "over-log", "power-grid"};
  if (!names.count(f))
    throw std::invalid_argument("unknown family \"" + f +
                                "\"; accepted: " + keys_for_message(names));
}

void check_dist_name(const std::string& d) {
  static const std::set<std::string> names = {"gaussian", "rademacher", "uniform",
                                              "student-t", "log-pareto"};
  if (!names.count(d))
    throw std::invalid_argument("unknown dist \"" + d +
                                "\"; accepted: " + keys_for_message(names));
}

void add_family_warnings(ExperimentConfig& cfg) {
  if (cfg.family == "sqrt-exp" && cfg.c <= 2.0)
    cfg.warnings.push_back(
        "sqrt-exp with c <= 2 lies outside the disjoint-window regime (needs c > 2)");
  if (cfg.family == "over-log" && cfg.c <= 1.0)
    cfg.warnings.push_back(
        "over-log with c <= 1 lies outside the disjoint-window regime (needs c > 1)");
  if (cfg.family == "power-grid" && cfg.c <= 1.0)
    cfg.warnings.push_back(
        "power-grid with c <= 1 lies outside the disjoint-window regime (needs c > 1)");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("config needs a string \"kind\"");

  ExperimentConfig cfg;
  cfg.kind = kind_from_name(j["kind"].get<std::string>());

  const auto& allowed = accepted_keys(cfg.kind);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("unknown key \"" + it.key() + "\" for kind " +
                                  std::string(to_string(cfg.kind)) +
                                  "; accepted keys: " + keys_for_message(allowed));

  auto get_num = [&](const char* key, double deflt) {
    if (!j.contains(key)) return deflt;
    if (!j[key].is_number())
      throw std::invalid_argument(std::string(key) + " must be a number");
    return j[key].get<double>();
  };
  auto get_int = [&](const char* key, long long deflt) {
    if (!j.contains(key)) return deflt;
    if (!j[key].is_number_integer())
      throw std::invalid_argument(std::string(key) + " must be an integer");
    return j[key].get<long long>();
  };
  auto get_str = [&](const char* key, const std::string& deflt) {
    if (!j.contains(key)) return deflt;
    if (!j[key].is_string())
      throw std::invalid_argument(std::string(key) + " must be a string");
    return j[key].get<std::string>();
  };

  const bool stochastic = cfg.kind == ExperimentKind::Simulate ||
                          cfg.kind == ExperimentKind::SurrogateLimsup ||
                          cfg.kind == ExperimentKind::Bounds;
  if (stochastic) {
    if (!j.contains("seed"))
      throw std::invalid_argument("stochastic kinds need a seed (config key or --seed)");
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw std::invalid_argument("seed must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  cfg.regime = get_str("regime", "log-log");
  check_regime_name(cfg.regime);
  if (j.contains("alpha")) cfg.alpha = require_open_unit(get_num("alpha", 0.5), "alpha");
  cfg.sigma = require_positive(get_num("sigma", 1.0), "sigma");
  auto get_pair = [&](const char* key, std::vector<double> deflt) {
    if (!j.contains(key)) return deflt;
    if (!j[key].is_array() || j[key].size() != 2)
      throw std::invalid_argument(std::string(key) +
                                  " must be a two-element array [p, q] of exponents");
    std::vector<double> v = j[key].get<std::vector<double>>();
    if (v[0] < 0 || v[1] < 0)
      throw std::invalid_argument(std::string(key) + " exponents must be nonnegative");
    return v;
  };
  cfg.l1 = get_pair("l1", cfg.l1);
  cfg.l2 = get_pair("l2", cfg.l2);

  cfg.dist = get_str("dist", "gaussian");
  check_dist_name(cfg.dist);
  cfg.nu = require_positive(get_num("nu", 3.0), "nu");
  cfg.tail_beta = require_positive(get_num("tail_beta", 2.0), "tail_beta");
  cfg.tail_gamma = get_num("tail_gamma", 0.0);
  cfg.tail_delta = get_num("tail_delta", 0.0);

  cfg.m = get_int("m", 1000);
  cfg.n = get_int("n", 1000);
  cfg.replicates = get_int("replicates",
                           cfg.kind == ExperimentKind::Bounds ? 1000000 : 100);
  cfg.eps = require_positive(get_num("eps", 1.0), "eps");
  cfg.delta = require_open_unit(get_num("delta", 0.1), "delta");
  cfg.gamma_slack = require_positive(get_num("gamma_slack", 0.1), "gamma_slack");
  cfg.eta = require_positive(get_num("eta", 0.2), "eta");

  if (cfg.kind == ExperimentKind::Simulate || cfg.kind == ExperimentKind::Bounds) {
    if (cfg.m < 3 || cfg.n < 3)
      throw std::invalid_argument("anchors m, n must be at least 3");
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  }

  if (cfg.kind == ExperimentKind::SurrogateLimsup ||
      cfg.kind == ExperimentKind::Subseq ||
      (cfg.kind == ExperimentKind::Bounds && j.contains("family"))) {
    cfg.family = get_str("family", "sqrt-exp");
    check_family_name(cfg.family);
    cfg.c = require_positive(get_num("c", 3.0), "c");
    if (j.contains("family_alpha"))
      cfg.family_alpha = require_open_unit(get_num("family_alpha", 0.5), "family_alpha");
    add_family_warnings(cfg);
  }

  if (cfg.kind == ExperimentKind::SurrogateLimsup) {
    cfg.budget = get_int("budget", 500);
    if (cfg.budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (j.contains("snapshots")) {
      if (!j["snapshots"].is_array())
        throw std::invalid_argument("snapshots must be an array of indices");
      cfg.snapshots = j["snapshots"].get<std::vector<long long>>();
      if (!std::is_sorted(cfg.snapshots.begin(), cfg.snapshots.end()))
        throw std::invalid_argument("snapshots must be ascending");
      if (!cfg.snapshots.empty() && cfg.snapshots.back() > cfg.budget)
        throw std::invalid_argument("snapshots must not exceed the budget");
    }
    if (cfg.snapshots.empty()) cfg.snapshots = {cfg.budget};
  }

  if (cfg.kind == ExperimentKind::Subseq) {
    cfg.i_max = get_int("i_max", 1000000);
    if (cfg.i_max < 10) throw std::invalid_argument("i_max must be >= 10");
  }

  if (cfg.kind == ExperimentKind::Moments ||
      cfg.kind == ExperimentKind::VerifyAppendix) {
    cfg.growth_case = static_cast<int>(get_int("growth_case", 1));
    if (cfg.growth_case < 1 || cfg.growth_case > 4)
      throw std::invalid_argument("growth_case must be 1, 2, 3 or 4");
  }

  if (cfg.kind == ExperimentKind::Moments) {
    cfg.horizon = get_int("horizon", 4096);
    if (cfg.horizon < 64) throw std::invalid_argument("horizon must be >= 64");
    cfg.band = require_positive(get_num("band", 0.02), "band");
    double beta_required = cfg.growth_case == 4 ? 2.0 / cfg.alpha : 2.0;
    if (std::fabs(cfg.tail_beta - beta_required) > 1e-9)
      throw std::invalid_argument(
          "the analytic classifier needs tail_beta to match the case weight (" +
          format_double(beta_required) + " here)");
  }

  if (cfg.kind == ExperimentKind::VerifyAppendix) {
    cfg.rel_tol = require_positive(get_num("rel_tol", 1e-3), "rel_tol");
    if (j.contains("x_values")) {
      if (!j["x_values"].is_array() || j["x_values"].empty())
        throw std::invalid_argument("x_values must be a nonempty array");
      cfg.x_values = j["x_values"].get<std::vector<double>>();
      for (double x : cfg.x_values)
        if (!(x >= 20.0))
          throw std::invalid_argument("x_values entries must be >= 20");
    } else {
      cfg.x_values = {1e4, 1e6, 1e8, 1e10, 1e12};
    }
  }

  if (cfg.kind == ExperimentKind::Bounds) {
    cfg.n_count = get_int("n_count", min_overshoot_count(cfg.eta, cfg.delta));
    if (j.contains("eps_factors")) {
      if (!j["eps_factors"].is_array() || j["eps_factors"].empty())
        throw std::invalid_argument("eps_factors must be a nonempty array");
      cfg.eps_factors = j["eps_factors"].get<std::vector<double>>();
      for (double f : cfg.eps_factors) require_positive(f, "eps_factors entry");
      if (cfg.family.empty())
        throw std::invalid_argument("eps_factors needs a family for the lattice scan");
      cfg.sum_horizon = get_int("sum_horizon", 4096);
      if (cfg.sum_horizon < 64)
        throw std::invalid_argument("sum_horizon must be >= 64");
    }
  }

  // canonical echo: every accepted key with its final value
  json echo;
  echo["kind"] = to_string(cfg.kind);
  if (stochastic) echo["seed"] = cfg.seed;
  for (const auto& key : allowed) {
    if (key == "kind" || key == "seed") continue;
    if (key == "regime") echo[key] = cfg.regime;
    else if (key == "alpha") echo[key] = cfg.alpha;
    else if (key == "sigma") echo[key] = cfg.sigma;
    else if (key == "l1") echo[key] = cfg.l1;
    else if (key == "l2") echo[key] = cfg.l2;
    else if (key == "dist") echo[key] = cfg.dist;
    else if (key == "nu") echo[key] = cfg.nu;
    else if (key == "tail_beta") echo[key] = cfg.tail_beta;
    else if (key == "tail_gamma") echo[key] = cfg.tail_gamma;
    else if (key == "tail_delta") echo[key] = cfg.tail_delta;
    else if (key == "m") echo[key] = cfg.m;
    else if (key == "n") echo[key] = cfg.n;
    else if (key == "replicates") echo[key] = cfg.replicates;
    else if (key == "eps") echo[key] = cfg.eps;
    else if (key == "delta") echo[key] = cfg.delta;
    else if (key == "gamma_slack") echo[key] = cfg.gamma_slack;
    else if (key == "eta") echo[key] = cfg.eta;
    else if (key == "n_count") echo[key] = cfg.n_count;
    else if (key == "family") { if (!cfg.family.empty()) echo[key] = cfg.family; }
    else if (key == "c") { if (!cfg.family.empty()) echo[key] = cfg.c; }
    else if (key == "family_alpha") { if (!cfg.family.empty()) echo[key] = cfg.family_alpha; }
    else if (key == "budget") echo[key] = cfg.budget;
    else if (key == "snapshots") echo[key] = cfg.snapshots;
    else if (key == "i_max") echo[key] = cfg.i_max;
    else if (key == "growth_case") echo[key] = cfg.growth_case;
    else if (key == "horizon") echo[key] = cfg.horizon;
    else if (key == "band") echo[key] = cfg.band;
    else if (key == "x_values") echo[key] = cfg.x_values;
    else if (key == "rel_tol") echo[key] = cfg.rel_tol;
    else if (key == "eps_factors") { if (!cfg.eps_factors.empty()) echo[key] = cfg.eps_factors; }
    else if (key == "sum_horizon") { if (!cfg.eps_factors.empty()) echo[key] = cfg.sum_horizon; }
  }
  if (!cfg.warnings.empty()) echo["warnings"] = cfg.warnings;
  cfg.canonical_json = echo.dump();
  return cfg;
}

WindowLaw law_from_config(const ExperimentConfig& cfg) {
  if (cfg.regime == "log-log") return log_log_law(cfg.sigma);
  if (cfg.regime == "loglog-loglog") return loglog_loglog_law(cfg.sigma);
  if (cfg.regime == "log-loglog") return log_loglog_law(cfg.sigma);
  if (cfg.regime == "power-log") return power_log_law(cfg.alpha, cfg.sigma);
  return general_law(SlowlyVarying(cfg.l1[0], cfg.l1[1]),
                     SlowlyVarying(cfg.l2[0], cfg.l2[1]), cfg.sigma);
}

DistributionSpec distribution_from_config(const ExperimentConfig& cfg) {
  if (cfg.dist == "gaussian") return GaussianSpec{cfg.sigma};
  if (cfg.dist == "rademacher") return RademacherSpec{};
  if (cfg.dist == "uniform") return UniformSpec{cfg.sigma};
  if (cfg.dist == "student-t") return StudentTSpec{cfg.nu};
  return LogPerturbedParetoSpec(cfg.tail_beta, cfg.tail_gamma, cfg.tail_delta);
}

SubseqFamily family_from_config(const ExperimentConfig& cfg) {
  if (cfg.family == "sqrt-exp") return SqrtExpFamily{cfg.c};
  if (cfg.family == "over-log") return OverLogFamily{cfg.c};
  return PowerGridFamily{cfg.c, cfg.family_alpha};
}

namespace {

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name -> bytes
};

RunManifest finalize(const ExperimentConfig& cfg, const std::string& out_dir,
                     int threads, Outputs& out, std::vector<CheckResult> checks,
                     double wall_seconds) {
  RunManifest man;
  man.experiment = to_string(cfg.kind);
  man.config_json = cfg.canonical_json;
  man.seed = cfg.seed;
  man.threads = threads;
  man.wall_seconds = wall_seconds;
  man.checks = std::move(checks);
  std::filesystem::create_directories(out_dir);
  for (auto& [name, bytes] : out.files) {
    std::string path = out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << bytes;
    if (!f) throw std::runtime_error("write failed for " + path);
    man.outputs.emplace_back(name, sha256_hex(bytes));
  }
  man.write(out_dir + "/" + man.experiment + "_manifest.json");
  return man;
}

std::string summary_bytes(const json& j) { return j.dump(2) + "\n"; }

// ---- simulate ----

void run_simulate(const ExperimentConfig& cfg, int threads, Outputs& out,
                  std::vector<CheckResult>& checks, json& summary) {
  WindowLaw law = law_from_config(cfg);
  DistributionSpec dist = distribution_from_config(cfg);
  WindowRect rect = window_rect(law, cfg.m, cfg.n);
  if (rect.cells() > kDirectModeCellCap)
    throw std::invalid_argument(
        "window has " + std::to_string(rect.cells()) +
        " cells, beyond the direct-mode cap; use surrogate-limsup instead");
  NormalizerBundle nb = rate_bundle(law, cfg.m, cfg.n);

  std::vector<WindowStatistic> rows(cfg.replicates);
  auto work = [&](long long lo, long long hi) {
    for (long long r = lo; r < hi; ++r) {
      std::uint64_t rs = stream_key(cfg.seed, 0x51u, static_cast<std::uint64_t>(r));
      rows[r] = windowed_statistic(law, cfg.m, cfg.n, dist, rs, cfg.eps, cfg.delta);
    }
  };
  if (threads <= 1) {
    work(0, cfg.replicates);
  } else {
    std::vector<std::thread> pool;
    long long chunk = (cfg.replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long long lo = t * chunk, hi = std::min<long long>(cfg.replicates, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  CsvTable csv("simulate", {"replicate", "t", "t_bounded", "t_middle", "t_top",
                            "normalized"});
  bool additive = true, finite = true;
  const bool exact = std::holds_alternative<RademacherSpec>(dist);
  double sum_z = 0, sum_z2 = 0, max_norm = -1e300;
  for (long long r = 0; r < cfg.replicates; ++r) {
    const auto& w = rows[r];
    double resid = std::fabs(w.t - (w.tp + w.tpp + w.tppp));
    double tol = exact ? 0.0 : 1e-9 * std::max(1.0, std::fabs(w.t));
    if (resid > tol) additive = false;
    if (!std::isfinite(w.t) || !std::isfinite(w.normalized)) finite = false;
    double z = w.t / std::sqrt(nb.area);
    sum_z += z;
    sum_z2 += z * z;
    max_norm = std::max(max_norm, w.normalized);
    csv.add_row({static_cast<double>(r), w.t, w.tp, w.tpp, w.tppp, w.normalized});
  }
  double mean_z = sum_z / cfg.replicates;
  double var_z = cfg.replicates > 1
                     ? (sum_z2 - cfg.replicates * mean_z * mean_z) / (cfg.replicates - 1)
                     : 0.0;

  checks.push_back({"truncation-additivity", additive,
                    exact ? "exact split" : "within 1e-9 relative"});
  checks.push_back({"finite-statistics", finite, ""});

  summary["area"] = nb.area;
  summary["rate"] = nb.rate;
  summary["f"] = nb.f;
  summary["cells"] = rect.cells();
  summary["replicates"] = cfg.replicates;
  summary["clt_variance_of_t_over_sqrt_area"] = var_z;
  summary["mean_t_over_sqrt_area"] = mean_z;
  summary["max_normalized"] = max_norm;
  out.files.emplace_back("simulate.csv", csv.str());
}

// ---- surrogate-limsup ----

void run_surrogate(const ExperimentConfig& cfg, Outputs& out,
                   std::vector<CheckResult>& checks, json& summary) {
  WindowLaw law = law_from_config(cfg);
  SubseqFamily fam = family_from_config(cfg);
  long long i0 = family_first_anchor_index(fam);
  if (cfg.budget < i0)
    throw std::invalid_argument("budget " + std::to_string(cfg.budget) +
                                " is below the first usable lattice index " +
                                std::to_string(i0));
  if (subseq_log_value(fam, static_cast<double>(cfg.budget)) > 690.0)
    throw std::invalid_argument(
        "lattice values overflow doubles at this budget; reduce it");
  for (long long s : cfg.snapshots)
    if (s < i0)
      throw std::invalid_argument("snapshot below the first usable lattice index");

  LimsupTracker tracker(TraceMode::Surrogate, /*record_all=*/false);
  std::set<long long> snap(cfg.snapshots.begin(), cfg.snapshots.end());
  std::vector<std::pair<long long, double>> snap_values;

  std::vector<double> values(static_cast<size_t>(cfg.budget - i0 + 1));
  for (long long i = i0; i <= cfg.budget; ++i)
    values[i - i0] = subseq_value(fam, i);

  auto cell = [&](long long i, long long jj) {
    SplitMix64 g(stream_key(cfg.seed, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(jj)));
    double stat = surrogate_statistic(law, values[i - i0], values[jj - i0], g);
    tracker.add(i, jj, values[i - i0], values[jj - i0], stat);
  };
  for (long long k = i0; k <= cfg.budget; ++k) {
    for (long long jj = i0; jj <= k; ++jj) cell(k, jj);
    for (long long i = i0; i < k; ++i) cell(i, k);
    if (snap.count(k)) snap_values.emplace_back(k, tracker.current_max());
  }

  CsvTable csv("surrogate-limsup", {"i", "j", "m", "n", "statistic", "running_max"});
  bool nondecreasing = true;
  double prev = -1e300;
  for (const auto& e : tracker.entries()) {
    if (e.running_max < prev) nondecreasing = false;
    prev = e.running_max;
    csv.add_row({static_cast<double>(e.i), static_cast<double>(e.j), e.m, e.n,
                 e.statistic, e.running_max});
  }
  bool snaps_ok = true;
  for (size_t k = 1; k < snap_values.size(); ++k)
    if (snap_values[k].second < snap_values[k - 1].second) snaps_ok = false;

  checks.push_back({"running-max-nondecreasing", nondecreasing, ""});
  checks.push_back({"snapshots-nondecreasing", snaps_ok, ""});

  summary["first_index"] = i0;
  summary["budget"] = cfg.budget;
  summary["cells"] = (cfg.budget - i0 + 1) * (cfg.budget - i0 + 1);
  summary["final_max"] = tracker.current_max();
  summary["best_i"] = tracker.best().i;
  summary["best_j"] = tracker.best().j;
  summary["records"] = static_cast<long long>(tracker.entries().size());
  json snaps = json::array();
  for (auto& [k, v] : snap_values) snaps.push_back({{"budget", k}, {"running_max", v}});
  summary["snapshots"] = snaps;
  if (!cfg.warnings.empty()) summary["warnings"] = cfg.warnings;
  out.files.emplace_back("surrogate-limsup.csv", csv.str());
}

// ---- moments ----

GrowthFunction growth_from_case(int k, double alpha) {
  switch (k) {
    case 1: return GrowthFunction::case1();
    case 2: return GrowthFunction::case2();
    case 3: return GrowthFunction::case3();
    default: return GrowthFunction::case4(alpha);
  }
}

Regime regime_from_case(int k) {
  switch (k) {
    case 1: return Regime::BothLog;
    case 2: return Regime::BothLoglog;
    case 3: return Regime::LogLoglog;
    default: return Regime::PowerLog;
  }
}

bool decisive_verdicts_agree(const EquivalenceReport& rep, MomentClass analytic) {
  Verdict expected = analytic == MomentClass::Finite ? Verdict::Convergent
                                                     : Verdict::Divergent;
  for (const ShellDiagnostic* d : {&rep.lattice, &rep.integral, &rep.expectation})
    if (d->verdict != Verdict::Boundary && d->verdict != expected) return false;
  return true;
}

void run_moments(const ExperimentConfig& cfg, Outputs& out,
                 std::vector<CheckResult>& checks, json& summary) {
  GrowthFunction G = growth_from_case(cfg.growth_case, cfg.alpha);
  LogPerturbedParetoSpec spec(cfg.tail_beta, cfg.tail_gamma, cfg.tail_delta);
  MomentClass analytic = classify_moment(spec, regime_from_case(cfg.growth_case),
                                         cfg.alpha);
  EquivalenceReport rep = equivalence_check(DistributionSpec(spec), G, cfg.horizon,
                                            cfg.band);

  CsvTable csv("moments",
               {"horizon", "lattice_shell", "integral_shell", "expectation_shell"});
  for (size_t k = 0; k < rep.lattice.shell_masses.size(); ++k)
    csv.add_row({std::exp(rep.lattice.log_horizons[k]), rep.lattice.shell_masses[k],
                 rep.integral.shell_masses[k], rep.expectation.shell_masses[k]});

  bool pairwise = true;
  {
    std::vector<Verdict> decisive;
    for (const ShellDiagnostic* d : {&rep.lattice, &rep.integral, &rep.expectation})
      if (d->verdict != Verdict::Boundary) decisive.push_back(d->verdict);
    for (size_t a = 1; a < decisive.size(); ++a)
      if (decisive[a] != decisive[0]) pairwise = false;
  }
  checks.push_back({"probes-agree-where-decisive", pairwise, ""});
  checks.push_back({"analytic-consistent", decisive_verdicts_agree(rep, analytic),
                    std::string("analytic ") + to_string(analytic)});

  summary["analytic"] = to_string(analytic);
  summary["lattice"] = {{"verdict", to_string(rep.lattice.verdict)},
                        {"slope", rep.lattice.slope}};
  summary["integral"] = {{"verdict", to_string(rep.integral.verdict)},
                         {"slope", rep.integral.slope}};
  summary["expectation"] = {{"verdict", to_string(rep.expectation.verdict)},
                            {"slope", rep.expectation.slope}};
  summary["agree"] = rep.agree;
  summary["consensus"] = to_string(rep.consensus);
  summary["tail"] = {{"beta", cfg.tail_beta},
                     {"gamma", cfg.tail_gamma},
                     {"delta", cfg.tail_delta},
                     {"x0", spec.x0()},
                     {"atom_mass", spec.atom_mass()}};
  out.files.emplace_back("moments.csv", csv.str());
}

// ---- bounds ----

void run_bounds(const ExperimentConfig& cfg, int threads, Outputs& out,
                std::vector<CheckResult>& checks, json& summary) {
  WindowLaw law = law_from_config(cfg);
  BoundParams p;
  p.eps = cfg.eps;
  p.delta = cfg.delta;
  p.gamma_slack = cfg.gamma_slack;
  p.sigma = cfg.sigma;
  p.n_count = cfg.n_count;
  p.eta = cfg.eta;
  validate(p);

  SandwichReport rep = tprime_tail_sandwich(law, cfg.m, cfg.n, p, cfg.sigma,
                                            cfg.seed, cfg.replicates, threads);

  CsvTable csv("bounds", {"d", "exact_tail_shape", "upper_bound", "lower_bound"});
  for (int k = 1; k <= 240; ++k) {
    double d = 0.25 * k;
    csv.add_row({d, normal_upper_tail(cfg.eps * std::sqrt(2.0 * d) / cfg.sigma),
                 kolmogorov_upper(p, d), kolmogorov_lower(p, d)});
  }
  out.files.emplace_back("bounds.csv", csv.str());

  checks.push_back({"mc-within-3se", rep.mc_within_3se,
                    "mc " + format_double(rep.mc_tail) + " vs exact " +
                        format_double(rep.exact_tail)});
  checks.push_back({"upper-binding-threshold-finite", std::isfinite(rep.d0),
                    "d0 = " + format_double(rep.d0)});

  summary["d"] = rep.d;
  summary["f"] = rep.f;
  summary["cells"] = rep.cells;
  summary["b_inactive"] = rep.b;
  summary["exact_tail"] = rep.exact_tail;
  summary["upper"] = rep.upper;
  summary["lower"] = rep.lower;
  summary["d0"] = rep.d0;
  summary["lower_validated"] = {rep.lower_lo, rep.lower_hi};
  summary["status"] = rep.status;
  summary["within_upper"] = rep.within_upper;
  summary["above_lower"] = rep.above_lower;
  summary["mc_tail"] = rep.mc_tail;
  summary["mc_se"] = rep.mc_se;
  summary["replicates"] = rep.replicates;
  summary["summability_threshold_eps"] = summability_threshold(cfg.sigma, cfg.delta);

  if (!cfg.eps_factors.empty()) {
    SubseqFamily fam = family_from_config(cfg);
    long long i0 = family_first_anchor_index(fam);
    if (subseq_log_value(fam, static_cast<double>(cfg.sum_horizon)) > 690.0)
      throw std::invalid_argument(
          "lattice values overflow doubles at sum_horizon; reduce it");
    std::vector<double> values(static_cast<size_t>(cfg.sum_horizon - i0 + 1));
    for (long long i = i0; i <= cfg.sum_horizon; ++i)
      values[i - i0] = subseq_value(fam, i);

    CsvTable scan("bounds-summability",
                  {"eps_factor", "eps", "kappa", "slope", "verdict_code"});
    json verdicts = json::array();
    bool matches = true;
    double eps_star = summability_threshold(cfg.sigma, cfg.delta);
    for (double factor : cfg.eps_factors) {
      BoundParams q = p;
      q.eps = factor * eps_star;
      auto term = [&](long long i, long long jj) {
        return kolmogorov_upper(q, rate_real(law, values[i - i0], values[jj - i0]));
      };
      ShellDiagnostic diag =
          summability_diagnostic(term, i0, i0, cfg.sum_horizon, cfg.band);
      double kappa = q.eps * q.eps * std::pow(1.0 - cfg.delta, 3.0) /
                     (cfg.sigma * cfg.sigma);
      scan.add_row({factor, q.eps, kappa, diag.slope,
                    diag.verdict == Verdict::Convergent ? 1.0
                    : diag.verdict == Verdict::Divergent ? -1.0
                                                         : 0.0});
      verdicts.push_back({{"eps_factor", factor},
                          {"kappa", kappa},
                          {"verdict", to_string(diag.verdict)},
                          {"slope", diag.slope}});
      if (std::fabs(kappa - 1.0) > 0.1) {
        Verdict expected = kappa > 1.0 ? Verdict::Convergent : Verdict::Divergent;
        if (diag.verdict != expected) matches = false;
      }
    }
    checks.push_back({"summability-matches-threshold", matches, ""});
    summary["summability"] = verdicts;
    out.files.emplace_back("bounds-summability.csv", scan.str());
  }
}

// ---- subseq ----

AxisRule canonical_rule(const ExperimentConfig& cfg) {
  if (cfg.family == "sqrt-exp") return LogFractionRule{};
  if (cfg.family == "over-log") return LogLogFractionRule{};
  return PowerRule{cfg.family_alpha};
}

WindowLaw default_law(const ExperimentConfig& cfg) {
  if (cfg.family == "sqrt-exp") return log_log_law(cfg.sigma);
  if (cfg.family == "over-log") return loglog_loglog_law(cfg.sigma);
  return power_log_law(cfg.family_alpha, cfg.sigma);
}

SubseqFamily with_c(const SubseqFamily& fam, double c) {
  if (std::holds_alternative<SqrtExpFamily>(fam)) return SqrtExpFamily{c};
  if (std::holds_alternative<OverLogFamily>(fam)) return OverLogFamily{c};
  return PowerGridFamily{c, std::get<PowerGridFamily>(fam).alpha};
}

void run_subseq(const ExperimentConfig& cfg, Outputs& out,
                std::vector<CheckResult>& checks, json& summary) {
  SubseqFamily fam = family_from_config(cfg);
  AxisRule rule = canonical_rule(cfg);
  WindowLaw law = default_law(cfg);
  const bool in_regime = cfg.warnings.empty();

  DisjointnessResult dis = disjointness_threshold(fam, rule, cfg.i_max);

  double c_gap = coupled_c(fam, cfg.eta);
  SubseqFamily fam_gap = with_c(fam, c_gap);
  // the power grid's gap system pairs its first axis with n / log n
  AxisRule gap_rule = cfg.family == "power-grid" ? AxisRule(LogFractionRule{}) : rule;
  long long gap_hi = std::min<long long>(cfg.i_max, 100000);
  GapReport gap = gap_report(fam_gap, gap_rule, cfg.eta,
                             family_first_index(fam_gap), gap_hi);

  CsvTable csv("subseq", {"check", "name", "index", "ok"});
  csv.add_row_mixed({"disjointness", family_name(fam),
                     std::to_string(dis.threshold), dis.found ? "1" : "0"});
  for (const auto& row : gap.rows)
    csv.add_row_mixed({"gap", row.name, std::to_string(row.first_hold),
                       row.ok() ? "1" : "0"});

  // variance bounds at a few anchors beyond the gap thresholds
  long long first_ok = family_first_index(fam_gap);
  for (const auto& row : gap.rows) first_ok = std::max(first_ok, row.first_hold);
  json var_rows = json::array();
  bool var_ok = true;
  for (long long i : {100ll, 1000ll, 10000ll}) {
    if (i <= first_ok) continue;
    if (subseq_log_value(fam_gap, static_cast<double>(i + 1)) > 300.0) continue;
    VarianceBoundReport v = block_variance_bounds(law, fam_gap, cfg.eta, i, i);
    for (const auto& r : v.rows) {
      csv.add_row_mixed({"variance", r.rect, std::to_string(i), r.ok() ? "1" : "0"});
      var_rows.push_back({{"rect", r.rect},
                          {"i", i},
                          {"variance", r.variance},
                          {"bound", r.bound}});
      if (!r.ok()) var_ok = false;
    }
  }

  checks.push_back({"gap-system-holds", gap.all_ok(),
                    "coupled c = " + format_double(c_gap)});
  checks.push_back({"disjointness", dis.found || !in_regime,
                    dis.found ? "threshold " + std::to_string(dis.threshold)
                              : "not found (family outside the proof regime)"});
  checks.push_back({"variance-bounds", var_ok, ""});

  summary["family"] = family_name(fam);
  summary["c"] = cfg.c;
  summary["c_gap"] = c_gap;
  summary["eta"] = cfg.eta;
  summary["i_max"] = cfg.i_max;
  summary["disjointness"] = {{"found", dis.found},
                             {"threshold", dis.threshold},
                             {"violations", dis.violations}};
  json gap_rows = json::array();
  for (const auto& row : gap.rows)
    gap_rows.push_back({{"name", row.name},
                        {"first_hold", row.first_hold},
                        {"later_violations",
                         static_cast<long long>(row.later_violations.size())}});
  summary["gap_rows"] = gap_rows;
  summary["variance_rows"] = var_rows;
  if (!cfg.warnings.empty()) summary["warnings"] = cfg.warnings;
  out.files.emplace_back("subseq.csv", csv.str());
}

// ---- verify-appendix ----

void run_appendix(const ExperimentConfig& cfg, Outputs& out,
                  std::vector<CheckResult>& checks, json& summary) {
  GrowthFunction G = growth_from_case(cfg.growth_case, cfg.alpha);
  CsvTable csv("verify-appendix", {"x", "numeric_M", "closed_form", "ratio"});
  std::vector<double> ratios;
  for (double x : cfg.x_values) {
    double numeric = sublevel_measure(G, x, cfg.rel_tol);
    double closed = closed_form_M(cfg.growth_case, x, cfg.alpha);
    double ratio = numeric / closed;
    ratios.push_back(ratio);
    csv.add_row({x, numeric, closed, ratio});
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  // symmetric relative change, so neither grid point is the privileged base
  double drift = 0;
  for (size_t k = 1; k < ratios.size(); ++k)
    drift = std::max(drift, std::fabs(ratios[k] - ratios[k - 1]) /
                                std::max(ratios[k], ratios[k - 1]));

  bool finite = lo > 0 && std::isfinite(hi);
  checks.push_back({"ratios-positive-finite", finite, ""});
  checks.push_back({"ratio-band-within-10x", finite && hi / lo <= 10.0,
                    "band " + format_double(hi / lo)});
  checks.push_back({"consecutive-drift-under-25pct", drift < 0.25,
                    "max drift " + format_double(drift)});

  summary["growth_case"] = cfg.growth_case;
  summary["ratios"] = ratios;
  summary["band_width"] = hi / lo;
  summary["max_drift"] = drift;
  out.files.emplace_back("verify-appendix.csv", csv.str());
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                           int threads) {
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  Outputs out;
  std::vector<CheckResult> checks;
  json summary;
  summary["version"] = kArtifactVersion;
  summary["experiment"] = to_string(cfg.kind);

  switch (cfg.kind) {
    case ExperimentKind::Simulate: run_simulate(cfg, threads, out, checks, summary); break;
    case ExperimentKind::SurrogateLimsup: run_surrogate(cfg, out, checks, summary); break;
    case ExperimentKind::Moments: run_moments(cfg, out, checks, summary); break;
    case ExperimentKind::Bounds: run_bounds(cfg, threads, out, checks, summary); break;
    case ExperimentKind::Subseq: run_subseq(cfg, out, checks, summary); break;
    case ExperimentKind::VerifyAppendix: run_appendix(cfg, out, checks, summary); break;
  }

  json check_json = json::array();
  for (const auto& c : checks)
    check_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  summary["checks"] = check_json;
  out.files.emplace_back(std::string(to_string(cfg.kind)) + "_summary.json",
                         summary_bytes(summary));

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  return finalize(cfg, out_dir, threads, out, std::move(checks), wall);
}

}  // namespace lsl
