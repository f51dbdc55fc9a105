#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "heavytail/bandit.hpp"
#include "heavytail/bounds.hpp"
#include "heavytail/engine.hpp"
#include "heavytail/estimators.hpp"
#include "heavytail/influence.hpp"
#include "heavytail/perturbations.hpp"

namespace py = pybind11;
using namespace heavytail;

namespace {

PerturbationSpec spec_from_args(const std::string& kind, double shape, double scale) {
  const PerturbKind k = perturb_kind_from_name(kind);
  double effective_shape = shape;
  if (kind == "gumbel") effective_shape = 0.0;
  if (kind == "exponential") effective_shape = 1.0;
  PerturbationSpec spec{k, effective_shape, scale};
  validate(spec);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust mean estimation and perturbed exploration for heavy-tailed bandits";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // influence-function estimator
  m.def("compute_bp", &compute_bp, py::arg("p"));
  m.def(
      "psi", [](double p, double c, double x) { return psi(InfluenceParams::make(p, c), x); },
      py::arg("p"), py::arg("c"), py::arg("x"));
  m.def(
      "p_robust_estimate",
      [](double p, double c, const std::vector<double>& samples, std::optional<std::size_t> n) {
        return p_robust_estimate(InfluenceParams::make(p, c), samples, n);
      },
      py::arg("p"), py::arg("c"), py::arg("samples"), py::arg("n_override") = std::nullopt);
  m.def(
      "tail_bound",
      [](double p, double c, std::size_t n, double eps, double nu_p) {
        return tail_bound(InfluenceParams::make(p, c), n, eps, nu_p);
      },
      py::arg("p"), py::arg("c"), py::arg("n"), py::arg("eps"), py::arg("nu_p"));

  // baseline estimators
  m.def(
      "sample_mean",
      [](const std::vector<double>& xs) { return estimate(EstimatorSpec::sample_mean(), xs); },
      py::arg("samples"));
  m.def(
      "truncated_mean",
      [](const std::vector<double>& xs, double p, double nu_p, double delta) {
        return estimate(EstimatorSpec::truncated_mean(p, nu_p, delta), xs);
      },
      py::arg("samples"), py::arg("p"), py::arg("nu_p"), py::arg("delta"));
  m.def(
      "median_of_means",
      [](const std::vector<double>& xs, double delta) {
        return estimate(EstimatorSpec::median_of_means(delta), xs);
      },
      py::arg("samples"), py::arg("delta"));

  // perturbation families
  py::class_<PerturbationSpec>(m, "PerturbationSpec")
      .def(py::init(&spec_from_args), py::arg("kind"), py::arg("shape"), py::arg("scale"))
      .def_readonly("shape", &PerturbationSpec::shape)
      .def_readonly("scale", &PerturbationSpec::scale)
      .def_property_readonly("kind",
                             [](const PerturbationSpec& s) {
                               return std::string(perturb_kind_name(s.kind));
                             })
      .def("__repr__", [](const PerturbationSpec& s) { return "PerturbationSpec:" + s.label(); });
  m.def("cdf", &cdf, py::arg("spec"), py::arg("x"));
  m.def("inverse_cdf", &inverse_cdf, py::arg("spec"), py::arg("y"));
  m.def("sample", &sample, py::arg("spec"), py::arg("u"));
  m.def("hazard", &hazard, py::arg("spec"), py::arg("x"));
  m.def("ln_zeta", &ln_zeta, py::arg("zeta"), py::arg("x"));
  m.def(
      "optimal_params",
      [](const std::string& kind, int arms) {
        return optimal_params(perturb_kind_from_name(kind), arms);
      },
      py::arg("kind"), py::arg("arms"));
  m.def(
      "check_assumption2",
      [](const PerturbationSpec& spec) {
        const Assumption2Report r = check_assumption2(spec);
        py::dict d;
        d["f_zero"] = r.f_zero;
        d["f_zero_ok"] = r.f_zero_ok;
        d["log_concave_ok"] = r.log_concave_ok;
        d["integral_C"] = r.integral_C;
        d["integral_bound"] = r.integral_bound ? py::cast(*r.integral_bound) : py::none();
        d["integral_ok"] = r.integral_ok;
        d["sup_hazard"] = r.sup_hazard;
        d["all_ok"] = r.all_ok();
        return d;
      },
      py::arg("spec"));

  // bandit environment
  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def_static("noiseless", &NoiseSpec::noiseless)
      .def_static("pareto_shifted", &NoiseSpec::pareto_shifted, py::arg("alpha"), py::arg("lambda"));
  py::class_<BanditInstance>(m, "BanditInstance")
      .def_readonly("means", &BanditInstance::means)
      .def("optimal_arm", &BanditInstance::optimal_arm)
      .def("gaps", &BanditInstance::gaps);
  m.def("draw_reward", &draw_reward, py::arg("instance"), py::arg("arm"), py::arg("u"));
  m.def("nu_p_bound", &nu_p_bound, py::arg("noise"), py::arg("y"), py::arg("p"));
  m.def("make_gap_instance", &make_gap_instance, py::arg("arms"), py::arg("delta"),
        py::arg("noise"));
  m.def("make_ucb_counterexample", &make_ucb_counterexample, py::arg("arms"), py::arg("horizon"),
        py::arg("p"), py::arg("nu"), py::arg("eta"));
  m.def("make_ape_counterexample", &make_ape_counterexample, py::arg("arms"), py::arg("horizon"),
        py::arg("p"), py::arg("c"), py::arg("spec"));

  // closed-form regret rates
  m.def(
      "gap_independent_bound",
      [](double p, double c, int arms, double horizon, const PerturbationSpec& spec) {
        BoundInputs in;
        in.p = p;
        in.c = c;
        in.num_arms = arms;
        in.horizon = horizon;
        in.spec = spec;
        return gap_independent_bound(in);
      },
      py::arg("p"), py::arg("c"), py::arg("arms"), py::arg("horizon"), py::arg("spec"));
  m.def(
      "gap_dependent_bound",
      [](double p, double c, int arms, double horizon, const std::vector<double>& gaps,
         const PerturbationSpec& spec) {
        BoundInputs in;
        in.p = p;
        in.c = c;
        in.num_arms = arms;
        in.horizon = horizon;
        in.gaps = gaps;
        in.spec = spec;
        return gap_dependent_bound(in);
      },
      py::arg("p"), py::arg("c"), py::arg("arms"), py::arg("horizon"), py::arg("gaps"),
      py::arg("spec"));
  m.def("ucb_lower_rate", &ucb_lower_rate, py::arg("arms"), py::arg("horizon"), py::arg("p"));
  m.def("ape_lower_rate", &ape_lower_rate, py::arg("arms"), py::arg("horizon"), py::arg("p"),
        py::arg("spec"));

  // experiment harness
  m.def(
      "run_experiment_json",
      [](const std::string& json_text) {
        ExperimentConfig config = parse_config_json(json_text);
        return run_experiment(config);
      },
      py::arg("json_text"), "Run an experiment from a JSON string; returns the CSV text.");
  m.def(
      "run_experiment_file",
      [](const std::string& path) {
        ExperimentConfig config = load_config_file(path);
        return run_experiment(config);
      },
      py::arg("path"), "Run an experiment from a JSON config file; returns the CSV text.");
}
