#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "twomode/sweep.hpp"

using namespace twomode;

namespace {

std::string csv(const std::string& command, const RunConfig& config, int jobs) {
  std::ostringstream out;
  const ResultTable table =
      command == "phase" ? run_phase(config, jobs) : command == "sbf" ? run_sbf(config, jobs) : run_dynamics(config, jobs);
  write_csv(out, table, command, config);
  return out.str();
}

std::string config_error(RunConfig& config, const std::string& text) {
  try {
    apply_config_text(config, text, "run.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(SweepSpec, ParsesAndSpaces) {
  const SweepAxis a = parse_sweep_spec("w:0.5:1.5:5");
  EXPECT_EQ(a.name, "w");
  const auto v = a.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v[1], 0.75);
  EXPECT_EQ(v.back(), 1.5);
}

TEST(SweepSpec, Rejects) {
  EXPECT_THROW(parse_sweep_spec("w:0.5:1.5"), ConfigError);
  EXPECT_THROW(parse_sweep_spec("ratio:0.5:1.5:10"), ConfigError);
  EXPECT_THROW(parse_sweep_spec("w:a:1.5:10"), ConfigError);
  EXPECT_THROW(parse_sweep_spec("w:0.5:1.5:1"), ConfigError);
  EXPECT_THROW(parse_sweep_spec("w:0.5:1.5:2.5"), ConfigError);
}

TEST(Cutoff, AutoAndInteger) {
  EXPECT_FALSE(parse_cutoff("auto").has_value());
  EXPECT_EQ(parse_cutoff("40"), 40);
  EXPECT_THROW(parse_cutoff("-1"), ConfigError);
  EXPECT_THROW(parse_cutoff("big"), ConfigError);
}

TEST(Config, YamlOverridesDefaults) {
  RunConfig c = default_config("sbf");
  apply_config_text(c,
                    "model:\n  lambda: 0.3\n  cutoff: 50\n"
                    "sweep:\n  name: w\n  start: 0.6\n  stop: 0.9\n  points: 4\n"
                    "output:\n  jobs: 2\n  out: run.csv\n");
  EXPECT_EQ(c.model.lambda, 0.3);
  EXPECT_EQ(c.model.g, 0.01);
  EXPECT_EQ(c.cutoff, 50);
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->points, 4);
  EXPECT_EQ(c.jobs, 2);
  EXPECT_EQ(c.out, "run.csv");

  apply_config_text(c, "sweep: \"lambda:0.1:0.2:3\"\n");
  EXPECT_EQ(c.sweep->name, "lambda");
}

TEST(Config, ErrorsNameLineAndField) {
  RunConfig c = default_config("phase");
  EXPECT_EQ(config_error(c, "model:\n  omega: 1\n  g: fast\n"),
            "run.yaml:3: field model.g: expected a number, got 'fast'");
  EXPECT_NE(config_error(c, "model:\n  kerr: 0.1\n").find("run.yaml:2: unknown key 'kerr' in model"), std::string::npos);
  EXPECT_NE(config_error(c, "output:\n  jobs: 0\n").find("run.yaml:2: field output.jobs"), std::string::npos);
  EXPECT_NE(config_error(c, "output:\n  format: json\n").find("output.format"), std::string::npos);
  EXPECT_NE(config_error(c, "model: [1, 2\n").find("run.yaml:"), std::string::npos);
  EXPECT_NE(config_error(c, "sweep:\n  name: w\n  start: 1\n").find("sweep.stop is required"), std::string::npos);
  EXPECT_THROW(apply_config_file(c, "/nonexistent/run.yaml"), ConfigError);
}

TEST(Jobs, FlagThenEnvironment) {
  EXPECT_EQ(resolve_jobs(3), 3);
  EXPECT_THROW(resolve_jobs(0), ConfigError);
  setenv("TWOMODE_JOBS", "5", 1);
  EXPECT_EQ(resolve_jobs(std::nullopt), 5);
  EXPECT_EQ(resolve_jobs(2), 2);
  setenv("TWOMODE_JOBS", "zero", 1);
  EXPECT_THROW(resolve_jobs(std::nullopt), ConfigError);
  unsetenv("TWOMODE_JOBS");
  EXPECT_GE(resolve_jobs(std::nullopt), 1);
}

TEST(Hash, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(ParallelMap, OrderAndExceptions) {
  const auto squares = parallel_map<int>(50, 4, [](int i) { return i * i; });
  for (int i = 0; i < 50; ++i) EXPECT_EQ(squares[i], i * i);
  EXPECT_THROW(parallel_map<int>(10, 3,
                                 [](int i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                   return i;
                                 }),
               std::runtime_error);
}

TEST(Phase, SmallSweepColumnsAndValues) {
  RunConfig c = default_config("phase");
  c.sweep = parse_sweep_spec("w:0.8:1.1:4");
  const ResultTable t = run_phase(c, 2);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"ratio", "n_alpha", "S_analytic", "S_numeric", "gap", "converged"}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_TRUE(t.all_converged);
  EXPECT_EQ(t.rows[0][1], 0.0);
  EXPECT_EQ(t.rows[0][2], 0.0);
  // w = 1.1: n = round(0.1/0.02) = 5.
  EXPECT_EQ(t.rows[3][1], 5.0);
  EXPECT_NEAR(t.rows[3][2], t.rows[3][3], 1e-8);
}

TEST(Phase, CsvIsDeterministicAcrossJobs) {
  RunConfig c = default_config("phase");
  c.sweep = parse_sweep_spec("w:0.9:1.2:7");
  const std::string one = csv("phase", c, 1);
  EXPECT_EQ(one, csv("phase", c, 3));
  EXPECT_EQ(one.rfind("# twomode ", 0), 0u);
  EXPECT_NE(one.find("# config-hash fnv1a:"), std::string::npos);
  EXPECT_NE(one.find("\nratio,n_alpha,"), std::string::npos);
  c.model.g = 0.011;
  EXPECT_NE(one.substr(0, 80), csv("phase", c, 1).substr(0, 80));
}

TEST(Sbf, ColumnsAndRejection) {
  RunConfig c = default_config("sbf");
  c.sweep = parse_sweep_spec("w:0.6:1.4:3");
  const ResultTable t = run_sbf(c, 1);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"ratio", "nu", "branch", "theta", "epsilon", "S_eq14",
                                                 "S_ed_quadratic", "converged"}));
  EXPECT_EQ(t.rows[0][2], 0.0);
  EXPECT_EQ(t.rows[2][2], 1.0);
  for (const auto& r : t.rows) EXPECT_NEAR(r[5], r[6], 1e-6);
  c.model.lambda = 0.0;
  EXPECT_THROW(run_sbf(c, 1), ConfigError);
  c.model.lambda = 0.1;
  c.sweep = parse_sweep_spec("t:0:1:3");
  EXPECT_THROW(run_sbf(c, 1), ConfigError);
}

TEST(Dynamics, ColumnsAndNuPrimeBytes) {
  RunConfig c = default_config("dynamics");
  c.time_points = 20;
  const ResultTable t = run_dynamics(c, 1);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "S_gaussian", "f_re", "f_im", "fp_re", "fp_im",
                                                 "canonical_residual"}));
  ASSERT_EQ(t.rows.size(), 20u);
  RunConfig doubled = c;
  doubled.model.nu_prime *= 2;
  const ResultTable u = run_dynamics(doubled, 1);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(t.rows[i][1], u.rows[i][1]);
}

TEST(Dynamics, OracleColumnAndRejections) {
  RunConfig c = default_config("dynamics");
  c.time_max = 2.0;
  c.time_points = 3;
  c.with_fock_oracle = true;
  const ResultTable t = run_dynamics(c, 1);
  EXPECT_EQ(t.columns[2], "S_fock_oracle");
  EXPECT_EQ(t.columns[3], "oracle_converged");
  EXPECT_TRUE(t.all_converged);
  for (const auto& r : t.rows) EXPECT_NEAR(r[1], r[2], 1e-8);

  RunConfig bad = default_config("dynamics");
  bad.model.w = 0.5;
  EXPECT_THROW(run_dynamics(bad, 1), ConfigError);
  bad = default_config("dynamics");
  bad.sweep = parse_sweep_spec("w:1:2:3");
  EXPECT_THROW(run_dynamics(bad, 1), ConfigError);
  bad = default_config("dynamics");
  bad.time_points = 1;
  EXPECT_THROW(run_dynamics(bad, 1), ConfigError);
}

TEST(PlotScript, NamesColumns) {
  const std::string s = plot_script("sbf", "out.csv");
  EXPECT_NE(s.find("S_ed_quadratic"), std::string::npos);
  EXPECT_NE(s.find("'out.csv'"), std::string::npos);
}
