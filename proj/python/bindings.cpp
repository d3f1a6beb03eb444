// Python bindings for the core library. Entropies are in nats throughout.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twomode/dynamics.hpp"
#include "twomode/mean_field.hpp"
#include "twomode/model.hpp"
#include "twomode/sweep.hpp"
#include "twomode/validation.hpp"

namespace py = pybind11;
using namespace twomode;

namespace {

py::dict table_to_dict(const ResultTable& table) {
  py::dict out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    std::vector<double> column;
    column.reserve(table.rows.size());
    for (const auto& row : table.rows) column.push_back(row[i]);
    out[py::str(table.columns[i])] = column;
  }
  return out;
}

RunConfig make_config(const std::string& command, const ModelParams* model, const std::optional<std::string>& sweep,
                      std::optional<int> cutoff, std::optional<double> time_max, std::optional<int> time_points,
                      bool with_fock_oracle) {
  RunConfig c = default_config(command);
  if (model) c.model = *model;
  if (sweep) c.sweep = parse_sweep_spec(*sweep);
  c.cutoff = cutoff;
  if (time_max) c.time_max = time_max;
  if (time_points) c.time_points = *time_points;
  c.with_fock_oracle = with_fock_oracle;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-mode Kerr model: ED, mean-field theory and Gaussian dynamics";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double omega, double w, double g, double lambda, double nu_prime) {
             ModelParams p{omega, w, g, lambda, nu_prime};
             p.validate();
             return p;
           }),
           py::arg("omega") = 1.0, py::arg("w") = 0.0, py::arg("g") = 0.01, py::arg("lam") = 0.0,
           py::arg("nu_prime") = 0.0)
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("w", &ModelParams::w)
      .def_readwrite("g", &ModelParams::g)
      .def_readwrite("lam", &ModelParams::lambda)
      .def_readwrite("nu_prime", &ModelParams::nu_prime)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(omega=" + std::to_string(p.omega) + ", w=" + std::to_string(p.w) +
               ", g=" + std::to_string(p.g) + ", lam=" + std::to_string(p.lambda) +
               ", nu_prime=" + std::to_string(p.nu_prime) + ")";
      });

  py::class_<PhaseClassification>(m, "PhaseClassification")
      .def_property_readonly("phase", [](const PhaseClassification& c) { return to_string(c.phase); })
      .def_readonly("n_alpha", &PhaseClassification::n_alpha)
      .def_readonly("n_alpha_upper", &PhaseClassification::n_alpha_upper)
      .def_readonly("ground_energy", &PhaseClassification::ground_energy);
  m.def("classify_phase", &classify_phase, py::arg("params"));
  m.def("fock_condensate_entropy", &fock_condensate_entropy, py::arg("n_alpha"));

  py::class_<CondensateSolution>(m, "CondensateSolution")
      .def_readonly("nu", &CondensateSolution::nu)
      .def_readonly("e0", &CondensateSolution::e0)
      .def_property_readonly("branch", [](const CondensateSolution& s) { return to_string(s.branch); })
      .def_readonly("all_real_roots", &CondensateSolution::all_real_roots);
  py::class_<BogoliubovParams>(m, "BogoliubovParams")
      .def_readonly("theta", &BogoliubovParams::theta)
      .def_readonly("epsilon", &BogoliubovParams::epsilon)
      .def_readonly("zero_point", &BogoliubovParams::zero_point)
      .def_readonly("a_coef", &BogoliubovParams::a_coef)
      .def_readonly("b_coef", &BogoliubovParams::b_coef);
  m.def("stationary_amplitude", &stationary_amplitude, py::arg("params"));
  m.def("bogoliubov_params", &bogoliubov_params, py::arg("params"), py::arg("solution"));
  m.def("squeezed_ground_entropy", &squeezed_ground_entropy, py::arg("theta"));

  m.def(
      "dynamical_entropy",
      [](const ModelParams& p, const std::vector<double>& times) {
        const DynamicsModel model(p);
        std::vector<double> out;
        out.reserve(times.size());
        for (double t : times) out.push_back(model.entropy(t));
        return out;
      },
      py::arg("params"), py::arg("times"));
  m.def(
      "fock_oracle_entropy",
      [](const ModelParams& p, const std::vector<double>& times, std::optional<int> cutoff) {
        FockOracleOptions options;
        options.cutoff = cutoff;
        std::vector<double> out;
        for (const FockOracleResult& r : fock_dynamics_oracle(p, times, options)) out.push_back(r.entropy);
        return out;
      },
      py::arg("params"), py::arg("times"), py::arg("cutoff") = std::nullopt);

  m.def(
      "run",
      [](const std::string& command, const ModelParams* model, std::optional<std::string> sweep,
         std::optional<int> cutoff, std::optional<double> time_max, std::optional<int> time_points,
         bool with_fock_oracle, std::optional<int> jobs) {
        const RunConfig c = make_config(command, model, sweep, cutoff, time_max, time_points, with_fock_oracle);
        const int n = resolve_jobs(jobs);
        if (command != "phase" && command != "sbf" && command != "dynamics") {
          throw ConfigError("unknown command '" + command + "'");
        }
        ResultTable t;
        {
          py::gil_scoped_release release;
          t = command == "phase" ? run_phase(c, n) : command == "sbf" ? run_sbf(c, n) : run_dynamics(c, n);
        }
        return table_to_dict(t);
      },
      py::arg("command"), py::arg("params") = nullptr, py::arg("sweep") = std::nullopt,
      py::arg("cutoff") = std::nullopt, py::arg("time_max") = std::nullopt, py::arg("time_points") = std::nullopt,
      py::arg("with_fock_oracle") = false, py::arg("jobs") = std::nullopt,
      "Run a subcommand and return its columns as a dict of lists.");

  m.def(
      "check_group",
      [](const std::string& group, bool full, std::optional<int> jobs) {
        std::vector<CheckResult> checks;
        {
          py::gil_scoped_release release;
          checks = run_check_group(group, full ? ValidationLevel::Full : ValidationLevel::Quick, resolve_jobs(jobs));
        }
        py::list out;
        for (const CheckResult& c : checks) {
          py::dict d;
          d["id"] = c.id;
          d["measured"] = c.measured;
          d["tolerance"] = c.tolerance;
          d["comparison"] = c.comparison;
          d["passed"] = c.passed;
          d["detail"] = c.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("group"), py::arg("full") = false, py::arg("jobs") = std::nullopt);
}
