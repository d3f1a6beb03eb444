#include "twomode/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "twomode/dynamics.hpp"
#include "twomode/mean_field.hpp"

namespace twomode {

namespace {

const std::set<std::string> kAxisNames = {"omega", "w", "g", "lambda", "nu_prime", "t"};

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ConfigError(what + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  const double value = parse_number(text, what);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
  return static_cast<int>(value);
}

void set_axis_param(ModelParams& p, const std::string& name, double value) {
  if (name == "omega") p.omega = value;
  else if (name == "w") p.w = value;
  else if (name == "g") p.g = value;
  else if (name == "lambda") p.lambda = value;
  else if (name == "nu_prime") p.nu_prime = value;
  else throw ConfigError("sweep: parameter '" + name + "' cannot be swept here");
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    out[i] = i + 1 == points ? stop : start + (stop - start) * double(i) / double(points - 1);
  }
  return out;
}

SweepAxis parse_sweep_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw ConfigError("sweep: expected name:start:stop:points, got '" + spec + "'");
  SweepAxis axis;
  axis.name = parts[0];
  if (!kAxisNames.count(axis.name)) {
    throw ConfigError("sweep: unknown parameter '" + axis.name + "' (allowed: omega, w, g, lambda, nu_prime, t)");
  }
  axis.start = parse_number(parts[1], "sweep.start");
  axis.stop = parse_number(parts[2], "sweep.stop");
  axis.points = parse_int(parts[3], "sweep.points");
  if (axis.points < 2) throw ConfigError("sweep.points: need at least 2 points");
  return axis;
}

std::optional<int> parse_cutoff(const std::string& text) {
  if (text == "auto") return std::nullopt;
  const int n = parse_int(text, "cutoff");
  if (n < 0) throw ConfigError("cutoff: must be >= 0 or 'auto'");
  return n;
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "omega=" << format_double(model.omega) << ";w=" << format_double(model.w)
      << ";g=" << format_double(model.g) << ";lambda=" << format_double(model.lambda)
      << ";nu_prime=" << format_double(model.nu_prime) << ";cutoff=" << (cutoff ? std::to_string(*cutoff) : "auto");
  if (sweep) {
    out << ";sweep=" << sweep->name << ":" << format_double(sweep->start) << ":" << format_double(sweep->stop) << ":"
        << sweep->points;
  }
  out << ";time_max=" << (time_max ? format_double(*time_max) : "auto") << ";time_points=" << time_points
      << ";with_fock_oracle=" << (with_fock_oracle ? 1 : 0);
  return out.str();
}

RunConfig default_config(const std::string& command) {
  RunConfig c;
  if (command == "phase" || command == "sbf") {
    c.model = ModelParams{1.0, 0.0, 0.01, command == "sbf" ? 0.1 : 0.0, 0.0};
    const double scale = c.model.omega + c.model.g;
    c.sweep = SweepAxis{"w", 0.5 * scale, 1.5 * scale, 201};
  } else if (command == "dynamics") {
    c.model = ModelParams{1.0, 2.0, 0.1, 0.11, 0.3};
  }
  return c;
}

// ---------------------------------------------------------------------------
// Config files

namespace {

std::string where(const std::string& source, const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.line < 0) return source;
  return source + ":" + std::to_string(mark.line + 1);
}

std::string scalar(const YAML::Node& node, const std::string& field, const std::string& source) {
  if (!node.IsScalar()) throw ConfigError(where(source, node) + ": field " + field + ": expected a scalar value");
  return node.Scalar();
}

void check_keys(const YAML::Node& table, const std::set<std::string>& allowed, const std::string& section,
                const std::string& source) {
  for (const auto& kv : table) {
    const std::string key = kv.first.Scalar();
    if (!allowed.count(key)) {
      throw ConfigError(where(source, kv.first) + ": unknown key '" + key + "' in " + section);
    }
  }
}

template <typename F>
void field(const YAML::Node& table, const std::string& key, const std::string& section, const std::string& source,
           F&& apply) {
  const YAML::Node node = table[key];
  if (!node) return;
  const std::string name = section + "." + key;
  const std::string text = scalar(node, name, source);
  try {
    apply(text, name);
  } catch (const ConfigError& e) {
    throw ConfigError(where(source, node) + ": field " + e.what());
  }
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

}  // namespace

void apply_config_text(RunConfig& config, const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return;
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a table of model/sweep/output");
  check_keys(root, {"model", "sweep", "output"}, "top level", source);

  if (const YAML::Node model = root["model"]) {
    if (!model.IsMap()) throw ConfigError(where(source, model) + ": model must be a table");
    check_keys(model, {"omega", "w", "g", "lambda", "nu-prime", "cutoff"}, "model", source);
    ModelParams& p = config.model;
    field(model, "omega", "model", source, [&](auto& s, auto& n) { p.omega = parse_number(s, n); });
    field(model, "w", "model", source, [&](auto& s, auto& n) { p.w = parse_number(s, n); });
    field(model, "g", "model", source, [&](auto& s, auto& n) { p.g = parse_number(s, n); });
    field(model, "lambda", "model", source, [&](auto& s, auto& n) { p.lambda = parse_number(s, n); });
    field(model, "nu-prime", "model", source, [&](auto& s, auto& n) { p.nu_prime = parse_number(s, n); });
    field(model, "cutoff", "model", source, [&](auto& s, auto&) { config.cutoff = parse_cutoff(s); });
  }

  if (const YAML::Node sweep = root["sweep"]) {
    if (sweep.IsScalar()) {
      try {
        config.sweep = parse_sweep_spec(sweep.Scalar());
      } catch (const ConfigError& e) {
        throw ConfigError(where(source, sweep) + ": " + e.what());
      }
    } else if (sweep.IsMap()) {
      check_keys(sweep, {"name", "start", "stop", "points", "time-max", "time-points"}, "sweep", source);
      if (sweep["name"]) {
        SweepAxis axis = config.sweep.value_or(SweepAxis{});
        field(sweep, "name", "sweep", source, [&](auto& s, auto&) {
          if (!kAxisNames.count(s)) throw ConfigError("sweep.name: unknown parameter '" + s + "'");
          axis.name = s;
        });
        field(sweep, "start", "sweep", source, [&](auto& s, auto& n) { axis.start = parse_number(s, n); });
        field(sweep, "stop", "sweep", source, [&](auto& s, auto& n) { axis.stop = parse_number(s, n); });
        field(sweep, "points", "sweep", source, [&](auto& s, auto& n) {
          axis.points = parse_int(s, n);
          if (axis.points < 2) throw ConfigError(n + ": need at least 2 points");
        });
        for (const char* key : {"start", "stop", "points"}) {
          if (!sweep[key]) throw ConfigError(where(source, sweep) + ": sweep." + key + " is required with sweep.name");
        }
        config.sweep = axis;
      }
      field(sweep, "time-max", "sweep", source, [&](auto& s, auto& n) { config.time_max = parse_number(s, n); });
      field(sweep, "time-points", "sweep", source, [&](auto& s, auto& n) { config.time_points = parse_int(s, n); });
    } else {
      throw ConfigError(where(source, sweep) + ": sweep must be a name:start:stop:points string or a table");
    }
  }

  if (const YAML::Node output = root["output"]) {
    if (!output.IsMap()) throw ConfigError(where(source, output) + ": output must be a table");
    check_keys(output, {"out", "format", "jobs", "with-fock-oracle", "report", "plot-script"}, "output", source);
    field(output, "out", "output", source, [&](auto& s, auto&) { config.out = s; });
    field(output, "format", "output", source, [&](auto& s, auto& n) {
      if (s != "csv") throw ConfigError(n + ": only 'csv' is supported");
      config.format = s;
    });
    field(output, "jobs", "output", source, [&](auto& s, auto& n) {
      const int jobs = parse_int(s, n);
      if (jobs < 1) throw ConfigError(n + ": must be >= 1");
      config.jobs = jobs;
    });
    field(output, "with-fock-oracle", "output", source,
          [&](auto& s, auto& n) { config.with_fock_oracle = parse_bool(s, n); });
    field(output, "report", "output", source, [&](auto& s, auto&) { config.report = s; });
    field(output, "plot-script", "output", source, [&](auto& s, auto&) { config.plot_script = s; });
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str(), path);
}

int resolve_jobs(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ConfigError("jobs: must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("TWOMODE_JOBS"); env && *env) {
    const int jobs = parse_int(env, "TWOMODE_JOBS");
    if (jobs < 1) throw ConfigError("TWOMODE_JOBS: must be >= 1");
    return jobs;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

void validate_model(const ModelParams& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<ModelParams> sweep_points(const RunConfig& config) {
  if (!config.sweep) return {config.model};
  if (config.sweep->name == "t") throw ConfigError("sweep: 't' is only valid for the dynamics command");
  std::vector<ModelParams> out;
  for (double x : config.sweep->values()) {
    ModelParams p = config.model;
    set_axis_param(p, config.sweep->name, x);
    validate_model(p);
    out.push_back(p);
  }
  return out;
}

struct EdSummary {
  double energy;
  double entropy;
  double gap;
};

EdSummary phase_ed(const ModelParams& p, int n_max) {
  const GroundState gs = ground_state(build_hamiltonian_ab(p, FockCutoff(n_max)));
  // On a degenerate boundary every multiplet member is a Fock condensate of
  // a different occupation; report the least entangled one (the lower n).
  double entropy = std::numeric_limits<double>::infinity();
  for (const PureState& member : gs.multiplet) entropy = std::min(entropy, entanglement_entropy(member));
  return {gs.energy, entropy, gs.gap};
}

}  // namespace

ResultTable run_phase(const RunConfig& config, int jobs) {
  const std::vector<ModelParams> points = sweep_points(config);
  ResultTable table;
  table.columns = {"ratio", "n_alpha", "S_analytic", "S_numeric", "gap", "converged"};
  const std::function<std::vector<double>(int)> row = [&](int i) {
    const ModelParams& p = points[i];
    const PhaseClassification phase = classify_phase(p);
    const double s_analytic = phase.phase == Phase::Normal ? 0.0 : fock_condensate_entropy(phase.n_alpha);
    const int n_max = config.cutoff.value_or(default_cutoff(p).n_max());
    const EdSummary here = phase_ed(p, n_max);
    const EdSummary next = phase_ed(p, n_max + 10);
    const bool converged =
        std::abs(here.energy - next.energy) < 1e-8 && std::abs(here.entropy - next.entropy) < 1e-8;
    return std::vector<double>{p.w / (p.omega + p.g), double(phase.n_alpha), s_analytic, here.entropy,
                               here.gap, converged ? 1.0 : 0.0};
  };
  table.rows = parallel_map<std::vector<double>>(int(points.size()), jobs, row);
  for (const auto& r : table.rows) table.all_converged = table.all_converged && r.back() == 1.0;
  return table;
}

ResultTable run_sbf(const RunConfig& config, int jobs) {
  const std::vector<ModelParams> points = sweep_points(config);
  for (const ModelParams& p : points) {
    if (!(p.lambda > 0.0)) throw ConfigError("sbf: lambda must be > 0 (Bogoliubov parameters diverge at lambda = 0)");
  }
  ResultTable table;
  table.columns = {"ratio", "nu", "branch", "theta", "epsilon", "S_eq14", "S_ed_quadratic", "converged"};
  const std::function<std::vector<double>(int)> row = [&](int i) {
    const ModelParams& p = points[i];
    const CondensateSolution sol = stationary_amplitude(p);
    const BogoliubovParams bogo = bogoliubov_params(p, sol);
    const QuadraticGroundCheck ed = quadratic_ground_check(p, sol, bogo, config.cutoff);
    return std::vector<double>{p.w / (p.omega + p.g), sol.nu, sol.branch == Branch::Superfluid ? 1.0 : 0.0,
                               bogo.theta, bogo.epsilon, squeezed_ground_entropy(bogo.theta), ed.entropy,
                               ed.converged ? 1.0 : 0.0};
  };
  table.rows = parallel_map<std::vector<double>>(int(points.size()), jobs, row);
  for (const auto& r : table.rows) table.all_converged = table.all_converged && r.back() == 1.0;
  return table;
}

ResultTable run_dynamics(const RunConfig& config, int /*jobs*/) {
  validate_model(config.model);
  if (config.sweep && config.sweep->name != "t") {
    throw ConfigError("dynamics: only 't' can be swept (got '" + config.sweep->name + "')");
  }
  const ModelParams& p = config.model;
  if (!(p.omega - p.w + p.g < 0.0) || !(p.lambda > 0.0)) {
    throw ConfigError("dynamics: requires the superfluid branch (omega - w + g < 0) and lambda > 0");
  }
  const DynamicsModel model(p);
  std::vector<double> times;
  if (config.sweep) {
    times = config.sweep->values();
  } else {
    const double t_max = config.time_max.value_or(3.0 * model.period());
    if (!(t_max > 0.0)) throw ConfigError("time-max: must be > 0");
    if (config.time_points < 2) throw ConfigError("time-points: need at least 2 points");
    times = SweepAxis{"t", 0.0, t_max, config.time_points}.values();
  }

  ResultTable table;
  table.columns = {"t", "S_gaussian"};
  std::vector<FockOracleResult> oracle;
  if (config.with_fock_oracle) {
    table.columns.insert(table.columns.end(), {"S_fock_oracle", "oracle_converged"});
    FockOracleOptions options;
    options.cutoff = config.cutoff;
    oracle = fock_dynamics_oracle(p, times, options);
  }
  table.columns.insert(table.columns.end(), {"f_re", "f_im", "fp_re", "fp_im", "canonical_residual"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const EvolutionCoefficients c = model.coefficients(times[i]);
    std::vector<double> r = {times[i], reduced_entropy(covariance_from_coefficients(c, p.nu_prime).covariance)};
    if (config.with_fock_oracle) {
      const bool converged = oracle[i].tail_weight < 1e-11;
      table.all_converged = table.all_converged && converged;
      r.insert(r.end(), {oracle[i].entropy, converged ? 1.0 : 0.0});
    }
    r.insert(r.end(), {c.f.real(), c.f.imag(), c.f_prime.real(), c.f_prime.imag(), c.canonical_residual()});
    table.rows.push_back(std::move(r));
  }
  return table;
}

void write_csv(std::ostream& out, const ResultTable& table, const std::string& command, const RunConfig& config) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(command + "|" + config.canonical())));
  out << "# twomode " << kToolVersion << " " << command << "\n";
  out << "# config-hash fnv1a:" << hash << "\n";
  out << "# config " << config.canonical() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

std::string plot_script(const std::string& command, const std::string& csv_path) {
  std::string x = "ratio", ys = "['S_analytic', 'S_numeric']", xlabel = "w/(omega+g)";
  if (command == "sbf") ys = "['S_eq14', 'S_ed_quadratic']";
  if (command == "dynamics") {
    x = "t";
    ys = "['S_gaussian', 'S_fock_oracle']";
    xlabel = "t";
  }
  std::ostringstream s;
  s << "import csv\n"
    << "import sys\n"
    << "import matplotlib\n"
    << "matplotlib.use('Agg')\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "path = sys.argv[1] if len(sys.argv) > 1 else " << "'" << csv_path << "'\n"
    << "with open(path) as fh:\n"
    << "    rows = list(csv.DictReader(line for line in fh if not line.startswith('#')))\n"
    << "x = [float(r['" << x << "']) for r in rows]\n"
    << "for name in " << ys << ":\n"
    << "    if rows and name in rows[0]:\n"
    << "        plt.plot(x, [float(r[name]) for r in rows], label=name)\n"
    << "plt.xlabel('" << xlabel << "')\n"
    << "plt.ylabel('S (nats)')\n"
    << "plt.legend()\n"
    << "plt.savefig(path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
  return s.str();
}

}  // namespace twomode
