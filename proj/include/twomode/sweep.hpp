// Run configuration, parameter sweeps and CSV output behind the command-line
// tool. Config files are YAML with three flat tables:
//
//   model:  {omega, w, g, lambda, nu-prime, cutoff}
//   sweep:  "name:start:stop:points" (or a table with those four keys),
//           plus time-max / time-points for dynamics
//   output: {out, format, jobs, with-fock-oracle, report, plot-script}
//
// Keys are spelled exactly like the command-line flags.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "twomode/model.hpp"

namespace twomode {

inline constexpr const char* kToolVersion = "0.3.0";

/// Bad or inconsistent configuration. The message names the field and, for
/// config files, the line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepAxis {
  /// One of omega, w, g, lambda, nu_prime, t.
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int points = 2;

  std::vector<double> values() const;
};

/// Parses "name:start:stop:points".
SweepAxis parse_sweep_spec(const std::string& spec);

struct RunConfig {
  ModelParams model;
  /// nullopt means "auto".
  std::optional<int> cutoff;
  std::optional<SweepAxis> sweep;
  std::optional<double> time_max;
  int time_points = 200;
  std::string out;  ///< empty: stdout
  std::string format = "csv";
  std::optional<int> jobs;
  bool with_fock_oracle = false;
  std::string report;
  std::string plot_script;

  /// Canonical text of every field that affects results; hashed into the
  /// CSV provenance line.
  std::string canonical() const;
};

/// Defaults for a subcommand: the reference parameter sets.
RunConfig default_config(const std::string& command);

/// Merges a YAML document into `config`. `source` names the document in
/// error messages.
void apply_config_text(RunConfig& config, const std::string& text, const std::string& source = "<config>");
void apply_config_file(RunConfig& config, const std::string& path);

/// Parses "auto" or a non-negative integer.
std::optional<int> parse_cutoff(const std::string& text);

/// Worker count: flag, else TWOMODE_JOBS, else the processor count.
int resolve_jobs(std::optional<int> flag);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// False if any ED-backed row failed its convergence check.
  bool all_converged = true;
};

ResultTable run_phase(const RunConfig& config, int jobs);
ResultTable run_sbf(const RunConfig& config, int jobs);
ResultTable run_dynamics(const RunConfig& config, int jobs);

/// CSV with '#' provenance lines, a header and 17 significant digits.
void write_csv(std::ostream& out, const ResultTable& table, const std::string& command, const RunConfig& config);

/// Self-contained matplotlib script that plots `csv_path`.
std::string plot_script(const std::string& command, const std::string& csv_path);

/// Evaluates fn(0..n-1) on `jobs` threads and returns the results in index
/// order. The first exception thrown by any task is rethrown.
template <typename T>
std::vector<T> parallel_map(int n, int jobs, const std::function<T(int)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::exception_ptr failure;
  std::mutex mutex;
  int next = 0;
  const auto worker = [&] {
    for (;;) {
      int i;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (next >= n || failure) return;
        i = next++;
      }
      try {
        T value = fn(i);
        std::lock_guard<std::mutex> lock(mutex);
        slots[i].emplace(std::move(value));
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace twomode
