#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lsllab/bounds.hpp"
#include "lsllab/field.hpp"
#include "lsllab/logs.hpp"
#include "lsllab/moments.hpp"
#include "lsllab/normalizers.hpp"
#include "lsllab/runner.hpp"
#include "lsllab/subsequence.hpp"

namespace py = pybind11;
using namespace lsl;

namespace {

Regime regime_from_name(const std::string& name) {
  if (name == "log-log") return Regime::BothLog;
  if (name == "loglog-loglog") return Regime::BothLoglog;
  if (name == "log-loglog") return Regime::LogLoglog;
  if (name == "power-log") return Regime::PowerLog;
  if (name == "general") return Regime::General;
  throw std::invalid_argument("unknown regime name " + name);
}

SubseqFamily family_from_name(const std::string& name, double c, double alpha) {
  if (name == "sqrt-exp") return SqrtExpFamily{c};
  if (name == "over-log") return OverLogFamily{c};
  if (name == "power-grid") return PowerGridFamily{c, alpha};
  throw std::invalid_argument("unknown family name " + name);
}

DistributionSpec dist_from_kwargs(const std::string& name, double sigma, double nu,
                                  double beta, double gamma, double delta) {
  if (name == "gaussian") return GaussianSpec{sigma};
  if (name == "rademacher") return RademacherSpec{};
  if (name == "uniform") return UniformSpec{sigma};
  if (name == "student-t") return StudentTSpec{nu};
  if (name == "log-pareto") return LogPerturbedParetoSpec(beta, gamma, delta);
  throw std::invalid_argument("unknown distribution name " + name);
}

GrowthFunction growth_from_case(int k, double alpha) {
  switch (k) {
    case 1: return GrowthFunction::case1();
    case 2: return GrowthFunction::case2();
    case 3: return GrowthFunction::case3();
    case 4: return GrowthFunction::case4(alpha);
    default: throw std::invalid_argument("growth case must be 1..4");
  }
}

}  // namespace

PYBIND11_MODULE(_lsllab, mod) {
  mod.doc() =
      "Numerical laboratory for two-dimensional delayed window sums: "
      "normalizers, window statistics, moment probes and tail bounds.";
  mod.attr("__version__") = kArtifactVersion;

  mod.def("log_plus", &log_plus, py::arg("x"), "max{ln x, 1}");
  mod.def("loglog_plus", &loglog_plus, py::arg("x"), "clamped iterated log");
  mod.def("loglog_raw", &loglog_raw, py::arg("x"), "ln ln x, needs x >= 3");

  py::class_<WindowLaw>(mod, "Law", "Window-length law for both axes")
      .def_static("log_log", &log_log_law, py::arg("sigma") = 1.0)
      .def_static("loglog_loglog", &loglog_loglog_law, py::arg("sigma") = 1.0)
      .def_static("log_loglog", &log_loglog_law, py::arg("sigma") = 1.0)
      .def_static("power_log", &power_log_law, py::arg("alpha"), py::arg("sigma") = 1.0)
      .def_static(
          "general",
          [](double p1, double q1, double p2, double q2, double sigma) {
            return general_law(SlowlyVarying(p1, q1), SlowlyVarying(p2, q2), sigma);
          },
          py::arg("p1"), py::arg("q1"), py::arg("p2"), py::arg("q2"),
          py::arg("sigma") = 1.0)
      .def_static("power_power", &power_power_law, py::arg("alpha1"), py::arg("alpha2"),
                  py::arg("sigma") = 1.0)
      .def("regime", [](const WindowLaw& law) { return to_string(classify_regime(law)); })
      .def("lsl_constant", [](const WindowLaw& law) { return lsl_constant(law); })
      .def(
          "rate",
          [](const WindowLaw& law, long long m, long long n) {
            NormalizerBundle b = rate_bundle(law, m, n);
            py::dict d;
            d["a1"] = b.a1;
            d["a2"] = b.a2;
            d["area"] = b.area;
            d["rate"] = b.rate;
            d["f"] = b.f;
            return d;
          },
          py::arg("m"), py::arg("n"))
      .def("rate_real", &rate_real, py::arg("m"), py::arg("n"))
      .def("truncation_level", &truncation_level, py::arg("m"), py::arg("n"),
           py::arg("eps"), py::arg("delta"));

  mod.def(
      "windowed_statistic",
      [](const WindowLaw& law, long long m, long long n, std::uint64_t seed,
         const std::string& dist, double sigma, double nu, double beta, double gamma,
         double delta_tail, double eps, double delta) {
        WindowStatistic w = windowed_statistic(
            law, m, n, dist_from_kwargs(dist, sigma, nu, beta, gamma, delta_tail),
            seed, eps, delta);
        py::dict d;
        d["t"] = w.t;
        d["t_bounded"] = w.tp;
        d["t_middle"] = w.tpp;
        d["t_top"] = w.tppp;
        d["normalized"] = w.normalized;
        d["b"] = w.b;
        d["top"] = w.top;
        d["cells"] = w.cells;
        return d;
      },
      py::arg("law"), py::arg("m"), py::arg("n"), py::arg("seed"),
      py::arg("dist") = "gaussian", py::arg("sigma") = 1.0, py::arg("nu") = 3.0,
      py::arg("beta") = 2.0, py::arg("gamma") = 0.0, py::arg("delta_tail") = 0.0,
      py::arg("eps") = 1.0, py::arg("delta") = 0.1,
      "One seeded window sum with its truncation split");

  mod.def(
      "sublevel_measure",
      [](int k, double x, double alpha, double rel_tol) {
        return sublevel_measure(growth_from_case(k, alpha), x, rel_tol);
      },
      py::arg("growth_case"), py::arg("x"), py::arg("alpha") = 0.5,
      py::arg("rel_tol") = 1e-3,
      "Lebesgue measure of the growth function's sublevel set");
  mod.def("closed_form_M", &closed_form_M, py::arg("growth_case"), py::arg("x"),
          py::arg("alpha") = 0.0);
  mod.def(
      "moment_function",
      [](const std::string& regime, double x, double alpha) {
        return moment_function(regime_from_name(regime), x, alpha);
      },
      py::arg("regime"), py::arg("x"), py::arg("alpha") = 0.5);
  mod.def(
      "classify_moment",
      [](const std::string& regime, double beta, double gamma, double delta,
         double alpha) {
        return std::string(to_string(classify_moment(
            LogPerturbedParetoSpec(beta, gamma, delta), regime_from_name(regime), alpha)));
      },
      py::arg("regime"), py::arg("beta") = 2.0, py::arg("gamma") = 0.0,
      py::arg("delta") = 0.0, py::arg("alpha") = 0.5,
      "Analytic finiteness verdict for the regime's moment condition");

  mod.def("normal_upper_tail", &normal_upper_tail, py::arg("z"));
  mod.def("summability_threshold", &summability_threshold, py::arg("sigma"),
          py::arg("delta"));
  mod.def(
      "kolmogorov_upper",
      [](double d, double eps, double delta, double gamma_slack, double sigma) {
        BoundParams p;
        p.eps = eps;
        p.delta = delta;
        p.gamma_slack = gamma_slack;
        p.sigma = sigma;
        return kolmogorov_upper(p, d);
      },
      py::arg("d"), py::arg("eps") = 1.0, py::arg("delta") = 0.1,
      py::arg("gamma_slack") = 0.1, py::arg("sigma") = 1.0);
  mod.def(
      "kolmogorov_lower",
      [](double d, double eps, double delta, double gamma_slack, double sigma) {
        BoundParams p;
        p.eps = eps;
        p.delta = delta;
        p.gamma_slack = gamma_slack;
        p.sigma = sigma;
        return kolmogorov_lower(p, d);
      },
      py::arg("d"), py::arg("eps") = 1.0, py::arg("delta") = 0.1,
      py::arg("gamma_slack") = 0.1, py::arg("sigma") = 1.0);

  mod.def(
      "subseq_value",
      [](const std::string& family, double c, long long i, double alpha) {
        return subseq_value(family_from_name(family, c, alpha), i);
      },
      py::arg("family"), py::arg("c"), py::arg("i"), py::arg("alpha") = 0.5);
  mod.def(
      "coupled_c",
      [](const std::string& family, double eta, double alpha) {
        return coupled_c(family_from_name(family, 1.0, alpha), eta);
      },
      py::arg("family"), py::arg("eta"), py::arg("alpha") = 0.5,
      "The c that ties a family to the gap slack eta");

  mod.def(
      "run_config",
      [](const std::string& config_json, const std::string& out_dir, int threads) {
        RunManifest man = run_experiment(parse_config(config_json), out_dir, threads);
        return man.to_json();
      },
      py::arg("config_json"), py::arg("out_dir") = ".", py::arg("threads") = 1,
      "Run one experiment from a JSON config; returns the manifest JSON");
}
