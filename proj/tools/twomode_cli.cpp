// twomode: parameter sweeps and the validation suite from the command line.
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
// non-convergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twomode/fock.hpp"
#include "twomode/sweep.hpp"
#include "twomode/validation.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::optional<double> omega, w, g, lambda, nu_prime, time_max;
  std::optional<std::string> cutoff, sweep, out, format, report, plot_script;
  std::optional<int> time_points, jobs;
  bool with_fock_oracle = false;
  bool bits = false;
  std::string level = "quick";
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "YAML config file (flags override it)");
  sub->add_option("--jobs", f.jobs, "worker threads (default: TWOMODE_JOBS, else processor count)");
  sub->add_option("--report", f.report, "write a JSON report to this path");
}

void add_model(CLI::App* sub, Flags& f) {
  sub->add_option("--omega", f.omega, "mode frequency");
  sub->add_option("--w", f.w, "transfer strength");
  sub->add_option("--g", f.g, "Kerr strength");
  sub->add_option("--lambda", f.lambda, "symmetry-breaking field amplitude");
  sub->add_option("--nu-prime", f.nu_prime, "initial coherent amplitude (dynamics)");
  sub->add_option("--cutoff", f.cutoff, "single-mode Fock cutoff, integer or 'auto'");
  sub->add_option("--sweep", f.sweep, "name:start:stop:points with name in omega, w, g, lambda, nu_prime, t");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv"}));
  sub->add_option("--plot-script", f.plot_script, "also write a matplotlib script for the CSV");
  sub->add_flag("--bits", f.bits, "report entropies in bits instead of nats");
}

twomode::RunConfig build_config(const std::string& command, const Flags& f) {
  twomode::RunConfig c = twomode::default_config(command);
  if (!f.config.empty()) twomode::apply_config_file(c, f.config);
  if (f.omega) c.model.omega = *f.omega;
  if (f.w) c.model.w = *f.w;
  if (f.g) c.model.g = *f.g;
  if (f.lambda) c.model.lambda = *f.lambda;
  if (f.nu_prime) c.model.nu_prime = *f.nu_prime;
  if (f.cutoff) c.cutoff = twomode::parse_cutoff(*f.cutoff);
  if (f.sweep) c.sweep = twomode::parse_sweep_spec(*f.sweep);
  if (f.time_max) c.time_max = *f.time_max;
  if (f.time_points) c.time_points = *f.time_points;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = *f.format;
  if (f.with_fock_oracle) c.with_fock_oracle = true;
  if (f.report) c.report = *f.report;
  if (f.plot_script) c.plot_script = *f.plot_script;
  return c;
}

void to_bits(twomode::ResultTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i].rfind("S_", 0) != 0) continue;
    for (auto& row : table.rows) row[i] = twomode::nats_to_bits(row[i]);
  }
}

int run_sweep(const std::string& command, const Flags& f) {
  const twomode::RunConfig config = build_config(command, f);
  const int jobs = twomode::resolve_jobs(config.jobs);
  twomode::ResultTable table = command == "phase"   ? twomode::run_phase(config, jobs)
                               : command == "sbf"   ? twomode::run_sbf(config, jobs)
                                                    : twomode::run_dynamics(config, jobs);
  if (f.bits) to_bits(table);
  if (config.out.empty()) {
    twomode::write_csv(std::cout, table, command, config);
  } else {
    std::ofstream out(config.out);
    if (!out) throw twomode::ConfigError(config.out + ": cannot open output file");
    twomode::write_csv(out, table, command, config);
  }
  if (!config.plot_script.empty()) {
    std::ofstream script(config.plot_script);
    if (!script) throw twomode::ConfigError(config.plot_script + ": cannot open plot script path");
    script << twomode::plot_script(command, config.out.empty() ? "data.csv" : config.out);
  }
  if (!table.all_converged) std::cerr << "warning: some rows did not pass the cutoff convergence check\n";
  return 0;
}

int run_validate(const Flags& f) {
  twomode::RunConfig config;
  if (!f.config.empty()) twomode::apply_config_file(config, f.config);
  if (f.jobs) config.jobs = *f.jobs;
  if (f.report) config.report = *f.report;
  const int jobs = twomode::resolve_jobs(config.jobs);
  const auto level = f.level == "full" ? twomode::ValidationLevel::Full : twomode::ValidationLevel::Quick;
  const auto report = twomode::run_validation(level, jobs, [](const twomode::CheckResult& c) {
    std::cerr << (c.passed ? "pass " : "FAIL ") << c.id << "  " << c.measured << " " << c.comparison << " "
              << c.tolerance << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  });
  if (!config.report.empty()) {
    std::ofstream out(config.report);
    if (!out) throw twomode::ConfigError(config.report + ": cannot open report path");
    out << report.to_json() << "\n";
  }
  std::cerr << (report.passed() ? "validation passed" : "validation FAILED") << " (" << report.seconds << " s)\n";
  return report.passed() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode Kerr model: exact diagonalization, mean-field theory and Gaussian dynamics"};
  app.set_version_flag("--version", std::string(twomode::kToolVersion));
  app.require_subcommand(1);
  Flags f;

  CLI::App* phase = app.add_subcommand("phase", "ground-state entanglement staircase (ED vs closed form)");
  CLI::App* sbf = app.add_subcommand("sbf", "mean-field entanglement with a symmetry-breaking field");
  CLI::App* dynamics = app.add_subcommand("dynamics", "entanglement growth of the evolved coherent state");
  CLI::App* validate = app.add_subcommand("validate", "run the acceptance and invariant checks");
  for (CLI::App* sub : {phase, sbf, dynamics}) {
    add_common(sub, f);
    add_model(sub, f);
  }
  dynamics->add_option("--time-max", f.time_max, "last time (default 3 pi/epsilon)");
  dynamics->add_option("--time-points", f.time_points, "number of times (default 200)");
  dynamics->add_flag("--with-fock-oracle", f.with_fock_oracle, "add the truncated-Fock propagation column");
  add_common(validate, f);
  validate->add_option("--level", f.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (validate->parsed()) return run_validate(f);
    const std::string command = phase->parsed() ? "phase" : sbf->parsed() ? "sbf" : "dynamics";
    return run_sweep(command, f);
  } catch (const twomode::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const twomode::ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
