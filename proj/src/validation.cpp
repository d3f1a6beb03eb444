#include "twomode/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "twomode/dynamics.hpp"
#include "twomode/mean_field.hpp"
#include "twomode/model.hpp"
#include "twomode/sweep.hpp"

namespace twomode {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CheckResult make_check(std::string id, std::string description, double measured, double tolerance,
                       std::string comparison, std::string detail = {}) {
  bool passed = false;
  if (comparison == "<=") passed = measured <= tolerance;
  else if (comparison == "<") passed = measured < tolerance;
  else if (comparison == ">=") passed = measured >= tolerance;
  else if (comparison == ">") passed = measured > tolerance;
  else if (comparison == "==") passed = measured == tolerance;
  std::string criterion = id.substr(0, id.find('.'));
  if (criterion.rfind("AC", 0) != 0) criterion = "INV";
  return {std::move(id), std::move(criterion), std::move(description), measured, tolerance,
          std::move(comparison), std::isfinite(measured) && passed, std::move(detail)};
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

int column(const ResultTable& table, const std::string& name) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), name);
  return static_cast<int>(it - table.columns.begin());
}

ModelParams dynamics_params() { return ModelParams{1.0, 2.0, 0.1, 0.11, 0.3}; }

// Exponent p in residual ~ lambda^p from successive halvings.
std::vector<double> halving_exponents(const std::vector<double>& residuals) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    out.push_back(std::log2(std::abs(residuals[i]) / std::abs(residuals[i + 1])));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> check_ac1(ValidationLevel level, int jobs) {
  RunConfig config = default_config("phase");
  if (level == ValidationLevel::Quick) config.sweep->points = 41;
  const auto start = Clock::now();
  const ResultTable table = run_phase(config, jobs);
  const double elapsed = seconds_since(start);

  const int c_ratio = column(table, "ratio"), c_n = column(table, "n_alpha"), c_sa = column(table, "S_analytic"),
            c_sn = column(table, "S_numeric"), c_conv = column(table, "converged");
  double normal_max = 0.0, diff_max = 0.0, formula_max = 0.0;
  int unconverged = 0, normal_rows = 0, condensate_rows = 0;
  const ModelParams base = config.model;
  for (const auto& row : table.rows) {
    const double w = row[c_ratio] * (base.omega + base.g);
    if (base.omega - w > 0.0) {
      ++normal_rows;
      normal_max = std::max({normal_max, std::abs(row[c_sa]), std::abs(row[c_sn])});
    } else {
      ++condensate_rows;
      // Binomial entropy by direct summation, independent of the log-gamma path.
      const int n = static_cast<int>(std::llround(row[c_n]));
      double s = 0.0, binom = 1.0;
      for (int k = 0; k <= n; ++k) {
        const double p = binom / std::pow(2.0, n);
        if (p > 0.0) s -= p * std::log(p);
        binom = binom * (n - k) / (k + 1);
      }
      formula_max = std::max(formula_max, std::abs(s - row[c_sa]));
    }
    if (row[c_conv] == 1.0) diff_max = std::max(diff_max, std::abs(row[c_sa] - row[c_sn]));
    else ++unconverged;
  }
  const std::string rows = std::to_string(table.rows.size()) + " rows";
  return {
      make_check("AC1.normal_zero", "S = 0 on normal-phase rows (analytic and ED)", normal_max, 1e-12, "<=",
                 std::to_string(normal_rows) + " normal rows"),
      make_check("AC1.binomial_formula", "S_analytic equals the binomial entropy at n = round((w-omega)/2g)",
                 formula_max, 1e-12, "<=", std::to_string(condensate_rows) + " condensate rows"),
      make_check("AC1.ed_vs_analytic", "max |S_ED - S_analytic| on converged rows (nats)", diff_max, 1e-8, "<=",
                 rows),
      make_check("AC1.converged", "unconverged sweep rows", unconverged, 0, "==", rows),
      make_check("AC1.runtime", "sweep wall time (s)", elapsed, 120.0, "<", rows),
  };
}

std::vector<CheckResult> check_ac2(ValidationLevel, int jobs) {
  const double omega = 1.0, g = 0.01;
  const std::function<std::vector<double>(int)> point = [&](int i) {
    // Occupation ratios spread over [1, 30], mostly off the integers.
    const double x = 1.0 + 29.0 * i / 19.0;
    ModelParams p{omega, omega + 2.0 * g * x, g, 0.0, 0.0};
    const PhaseClassification phase = classify_phase(p);
    const GroundState gs = ground_state(build_hamiltonian_alphabeta(p, default_cutoff(p)));
    const double n = std::llround(x);
    return std::vector<double>{n, std::abs(gs.energy - ((omega - p.w) * n + g * n * n)),
                               double(phase.n_alpha)};
  };
  const auto results = parallel_map<std::vector<double>>(20, jobs, point);
  double worst = 0.0;
  int n_min = 1 << 30, n_max = 0, mismatched = 0;
  for (const auto& r : results) {
    worst = std::max(worst, r[1]);
    n_min = std::min(n_min, int(r[0]));
    n_max = std::max(n_max, int(r[0]));
    if (r[2] != r[0]) ++mismatched;
  }
  return {
      make_check("AC2.ground_energy", "max |E_ED - ((omega-w) n + g n^2)| over 20 sets", worst, 1e-10, "<=",
                 "n_alpha from " + std::to_string(n_min) + " to " + std::to_string(n_max)),
      make_check("AC2.classification", "sets where classify_phase disagrees with round((w-omega)/2g)", mismatched,
                 0, "=="),
  };
}

struct ShiftSeries {
  std::vector<double> residuals;
  std::vector<double> exponents;
};

ShiftSeries shift_series(ModelParams p, const std::vector<double>& lambdas) {
  const FockCutoff cutoff = default_cutoff(p);
  p.lambda = 0.0;
  const double e_unperturbed = ground_state(build_sbf_hamiltonian(p, cutoff)).energy;
  ShiftSeries out;
  for (double lambda : lambdas) {
    p.lambda = lambda;
    const double e = ground_state(build_sbf_hamiltonian(p, cutoff)).energy;
    out.residuals.push_back(e - e_unperturbed - perturbative_energy_shift(p).delta_e);
  }
  out.exponents = halving_exponents(out.residuals);
  return out;
}

std::vector<CheckResult> check_ac3(ValidationLevel, int) {
  const std::vector<double> lambdas = {1e-3, 5e-4, 2.5e-4};
  std::vector<CheckResult> out;
  const auto exponent_check = [&](const std::string& id, const std::string& what, const ModelParams& p,
                                  double expected) {
    const ShiftSeries s = shift_series(p, lambdas);
    double worst = 0.0;
    std::string detail = "exponents";
    for (double e : s.exponents) {
      worst = std::max(worst, std::abs(e - expected));
      detail += " " + fmt(e);
    }
    detail += "; residuals";
    for (double r : s.residuals) detail += " " + fmt(r);
    out.push_back(make_check(id, what + ": |exponent - " + fmt(expected) + "|", worst, 0.3, "<=", detail));
  };
  exponent_check("AC3.normal_order4", "normal phase (w=0.5) residual order", ModelParams{1.0, 0.5, 0.01, 0, 0}, 4.0);
  exponent_check("AC3.condensate_order4", "condensate n=2 (w=1.04) residual order",
                 ModelParams{1.0, 1.04, 0.01, 0, 0}, 4.0);
  exponent_check("AC3.boundary_order2", "boundary (w=1.05) residual after -lambda sqrt3",
                 ModelParams{1.0, 1.05, 0.01, 0, 0}, 2.0);

  const PerturbativeShift normal = perturbative_energy_shift(ModelParams{1.0, 0.5, 0.01, 0.01, 0});
  out.push_back(make_check("AC3.normal_value", "|dE(lambda=0.01) + 1.96078431e-4| (normal)",
                           std::abs(normal.delta_e + 0.01 * 0.01 / 0.51), 1e-15, "<="));
  const PerturbativeShift boundary = perturbative_energy_shift(ModelParams{1.0, 1.05, 0.01, 1e-4, 0});
  out.push_back(make_check("AC3.boundary_value", "|dE + 1e-4 sqrt3| (boundary)",
                           std::abs(boundary.delta_e + 1e-4 * std::sqrt(3.0)), 1e-15, "<="));
  return out;
}

std::vector<CheckResult> check_ac4(ValidationLevel, int) {
  const ModelParams p = dynamics_params();
  const CondensateSolution sol = stationary_amplitude(p);
  const BogoliubovParams bogo = bogoliubov_params(p, sol);
  const QuadraticGroundCheck ed = quadratic_ground_check(p, sol, bogo);
  return {
      make_check("AC4.nu_value", "|nu - 2.179976222308| (cubic root oracle)", std::abs(sol.nu - 2.179976222308),
                 1e-9, "<="),
      make_check("AC4.stationarity", "stationarity residual at nu", std::abs(stationarity_residual(p, sol.nu)), 1e-12,
                 "<="),
      make_check("AC4.gap_epsilon", "|ED gap - epsilon|", std::abs(ed.gap - bogo.epsilon), 1e-8, "<=",
                 "cutoff " + std::to_string(ed.cutoff)),
      make_check("AC4.zero_point", "|ED ground - epsilon_0|", std::abs(ed.ground_energy - bogo.zero_point), 1e-8,
                 "<="),
      make_check("AC4.overlap", "1 - |<ED|squeezed>|^2", 1.0 - ed.overlap, 1e-8, "<=",
                 "matching theta sign " + std::to_string(ed.matching_theta_sign)),
      make_check("AC4.entropy", "|S(theta) - S_ED|", std::abs(squeezed_ground_entropy(bogo.theta) - ed.entropy), 1e-6,
                 "<="),
      make_check("AC4.converged", "quadratic ED converged in cutoff", ed.converged ? 1 : 0, 1, "=="),
  };
}

std::vector<CheckResult> check_ac5(ValidationLevel level, int jobs) {
  RunConfig config = default_config("sbf");
  if (level == ValidationLevel::Quick) config.sweep->points = 41;
  config.model.lambda = 0.1;
  const ResultTable small = run_sbf(config, jobs);
  config.model.lambda = 0.3;
  const ResultTable large = run_sbf(config, jobs);

  const int c_ratio = column(small, "ratio"), c_s = column(small, "S_eq14"), c_ed = column(small, "S_ed_quadratic"),
            c_conv = column(small, "converged");
  const double scale = config.model.omega + config.model.g;
  double min_s = std::numeric_limits<double>::infinity(), deep_normal = 0.0, order_gap = 0.0, ed_diff = 0.0;
  double rise = std::numeric_limits<double>::infinity();
  int unconverged = 0, deep_rows = 0;
  for (const ResultTable* t : {&small, &large}) {
    double at_critical = 0.0;
    for (const auto& row : t->rows) {
      min_s = std::min(min_s, row[c_s]);
      const double w = row[c_ratio] * scale;
      if (row[c_ratio] <= 0.55 + 1e-12) {
        deep_normal = std::max(deep_normal, row[c_s]);
        ++deep_rows;
      }
      if (w <= config.model.omega + config.model.g) at_critical = row[c_s];
      if (row[c_conv] == 1.0) ed_diff = std::max(ed_diff, std::abs(row[c_s] - row[c_ed]));
      else ++unconverged;
    }
    rise = std::min(rise, t->rows.back()[c_s] - at_critical);
  }
  double worst_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < small.rows.size(); ++i) {
    const double w = small.rows[i][c_ratio] * scale;
    if (config.model.omega - w + config.model.g < 0.0) {
      worst_order = std::min(worst_order, small.rows[i][c_s] - large.rows[i][c_s]);
    }
  }
  order_gap = worst_order;
  const std::string rows = std::to_string(small.rows.size()) + " rows per curve";
  return {
      make_check("AC5.nonnegative", "min S over both curves", min_s, 0.0, ">=", rows),
      make_check("AC5.deep_normal", "max S at ratio <= 0.55", deep_normal, 1e-3, "<",
                 std::to_string(deep_rows) + " rows"),
      make_check("AC5.rise", "min over curves of S(ratio 1.5) - S(critical ratio)", rise, 0.0, ">"),
      make_check("AC5.lambda_order", "min over condensate rows of S(0.1) - S(0.3)", order_gap, 0.0, ">="),
      make_check("AC5.ed_vs_closed_form", "max |S_closed_form - S_ED| on converged rows", ed_diff, 1e-6, "<="),
      make_check("AC5.converged", "unconverged sweep rows", unconverged, 0, "=="),
  };
}

std::vector<CheckResult> check_ac6(ValidationLevel level, int) {
  ModelParams p = dynamics_params();
  const DynamicsModel model(p);
  const double period = model.period();
  std::vector<CheckResult> out;
  out.push_back(make_check("AC6.initial", "S(0)", std::abs(model.entropy(0.0)), 1e-12, "<="));

  double period_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = 3.0 * period * i / 199.0;
    period_err = std::max(period_err, std::abs(model.entropy(t) - model.entropy(t + period)));
  }
  out.push_back(make_check("AC6.period", "max |S(t) - S(t + pi/epsilon)| on 200 points", period_err, 1e-9, "<="));

  ModelParams p_small = p, p_large = p;
  p_small.nu_prime = 0.5;
  p_large.nu_prime = 5.0;
  const DynamicsModel m_small(p_small), m_large(p_large);
  int mismatched = 0;
  for (int i = 0; i < 200; ++i) {
    const double t = 3.0 * period * i / 199.0;
    const double a = m_small.entropy(t), b = m_large.entropy(t);
    if (std::memcmp(&a, &b, sizeof a) != 0) ++mismatched;
  }
  out.push_back(make_check("AC6.nu_prime_bytes", "points where S differs bitwise between nu' = 0.5 and 5.0",
                           mismatched, 0, "=="));

  const std::vector<double> phases = level == ValidationLevel::Full ? std::vector<double>{0.25, 0.5, 1.0, 2.0, 2.5}
                                                                     : std::vector<double>{0.25, 0.5};
  std::vector<double> times;
  for (double x : phases) times.push_back(x / model.bogo.epsilon);
  const auto oracle = fock_dynamics_oracle(p, times);
  double worst = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, std::abs(oracle[i].entropy - model.entropy(times[i])));
    tail = std::max(tail, oracle[i].tail_weight);
  }
  const int cutoff = oracle.front().cutoff;
  out.push_back(make_check("AC6.oracle", "max |S_gaussian - S_fock| at " + std::to_string(times.size()) + " times",
                           worst, 1e-4, "<=", "cutoff " + std::to_string(cutoff) + ", tail " + fmt(tail)));
  if (level == ValidationLevel::Full) {
    FockOracleOptions doubled;
    doubled.cutoff = 2 * cutoff;
    const auto fine = fock_dynamics_oracle(p, times, doubled);
    double change = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) change = std::max(change, std::abs(fine[i].entropy - oracle[i].entropy));
    out.push_back(make_check("AC6.oracle_doubling", "max oracle change from cutoff " + std::to_string(cutoff) +
                                                        " to " + std::to_string(2 * cutoff),
                             change, 1e-6, "<="));
  }
  return out;
}

std::vector<CheckResult> check_ac7(ValidationLevel, int) {
  const DynamicsModel model(dynamics_params());
  const double span = 3.0 * model.period();
  double canonical = 0.0, symplectic = 0.0, margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const double t = span * i / 999.0;
    const EvolutionCoefficients c = model.coefficients(t);
    canonical = std::max(canonical, std::abs(c.canonical_residual()));
    const GaussianState s = covariance_from_coefficients(c, model.params.nu_prime);
    const Eigen::Vector2d nu = symplectic_eigenvalues(s.covariance);
    symplectic = std::max({symplectic, std::abs(nu[0] - 0.5), std::abs(nu[1] - 0.5)});
    margin = std::min(margin, uncertainty_margin(s.covariance));
  }
  return {
      make_check("AC7.canonical", "max ||f|^2 - |f'|^2 - 1| on 1000 times", canonical, 1e-12, "<="),
      make_check("AC7.symplectic", "max |symplectic eigenvalue - 1/2|", symplectic, 1e-10, "<="),
      make_check("AC7.uncertainty", "min eigenvalue of V + (i/2) Omega", margin, -1e-12, ">="),
  };
}

std::vector<CheckResult> check_ac8(ValidationLevel, int) {
  const ModelParams base = dynamics_params();
  const std::vector<double> lambdas = {0.05, 0.11};
  double eps_ref = 0.0;
  for (double lambda : lambdas) {
    ModelParams p = base;
    p.lambda = lambda;
    eps_ref = std::max(eps_ref, DynamicsModel(p).bogo.epsilon);
  }
  std::vector<double> times;
  for (int i = 0; i <= 240; ++i) times.push_back(1.2 / eps_ref * i / 240.0);
  const SensitivityReport report = short_time_sbf_sensitivity(base, lambdas, times);
  const std::string detail = "short " + fmt(report.short_time_spread) + ", late " + fmt(report.late_spread);
  return {
      make_check("AC8.short_below_late", "short-time spread minus late spread", report.short_time_spread -
                 report.late_spread, 0.0, "<", detail),
      make_check("AC8.regression", "short-time relative spread (frozen bound)", report.short_time_spread,
                 kShortTimeSpreadBound, "<=", detail),
  };
}

// ---------------------------------------------------------------------------
// Cross-module invariants

std::vector<CheckResult> check_invariants(ValidationLevel level, int jobs) {
  std::vector<CheckResult> out;

  {  // Builders are Hermitian.
    double worst = 0.0;
    for (const ModelParams& p : {ModelParams{1, 0.5, 0.01, 0.1, 0}, ModelParams{1, 2, 0.1, 0.11, 0}}) {
      const FockCutoff c(20);
      worst = std::max({worst, hermiticity_defect(build_hamiltonian_ab(p, c).matrix()),
                        hermiticity_defect(build_hamiltonian_alphabeta(p, c).matrix()),
                        hermiticity_defect(build_sbf_hamiltonian(p, c).matrix())});
    }
    out.push_back(make_check("FC.hermiticity", "max relative ||H - H^dag|| over builders", worst, 1e-12, "<="));
  }

  {  // Schmidt route equals partial-trace route.
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal;
    const int count = level == ValidationLevel::Full ? 100 : 20;
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const FockCutoff c(1 + i % 6);
      Vector v(c.two_mode_dim());
      for (auto& x : v) x = cplx(normal(rng), normal(rng));
      const PureState psi(c, v);
      worst = std::max({worst, std::abs(schmidt_entropy(psi) - von_neumann_entropy(partial_trace(psi, Mode::A))),
                        std::abs(schmidt_entropy(psi) - von_neumann_entropy(partial_trace(psi, Mode::B)))});
    }
    out.push_back(make_check("FC.schmidt_vs_trace", "max |S_schmidt - S_trace| on " + std::to_string(count) +
                                                        " random states",
                             worst, 1e-10, "<="));
  }

  {  // Propagation keeps norm and energy.
    const ModelParams p{1.0, 1.04, 0.01, 0.05, 0};
    const FockCutoff c(30);
    const TwoModeOperator h = build_sbf_hamiltonian(p, c);
    const PureState psi0 = coherent_state(cplx(1.2, 0.3), cplx(0.5, 0.0), c).state;
    const double e0 = psi0.expectation(h).real();
    double norm_drift = 0.0, energy_drift = 0.0;
    for (double t : {0.5, 5.0, 50.0}) {
      const Vector v = Propagator(h.matrix()).apply(psi0.amplitudes(), t);
      norm_drift = std::max(norm_drift, std::abs(v.norm() - 1.0));
      energy_drift = std::max(energy_drift, std::abs(v.dot(h.matrix() * v).real() - e0) / std::abs(e0));
    }
    out.push_back(make_check("FC.propagation_norm", "norm drift under propagation", norm_drift, 1e-10, "<="));
    out.push_back(make_check("FC.propagation_energy", "relative energy drift under propagation", energy_drift, 1e-8,
                             "<="));
  }

  {  // (a,b) and (alpha,beta) builders share a spectrum.
    const ModelParams p{1.0, 1.1, 0.02, 0.0, 0};
    const FockCutoff c(30);
    const auto ab = lowest_eigenpairs(build_hamiltonian_ab(p, c).matrix(), 10);
    const auto alphabeta = lowest_eigenpairs(build_hamiltonian_alphabeta(p, c).matrix(), 10);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(ab[i].value - alphabeta[i].value));
    out.push_back(make_check("MS.unitary_equivalence", "lowest 10 levels, (a,b) vs (alpha,beta) builders", worst,
                             1e-9, "<="));
  }

  {  // Binomial entropy against rotation + partial trace, and monotonicity.
    double worst = 0.0, step = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= 12; ++n) {
      const FockCutoff c(12);
      const PureState ab = rotate_modes(PureState::fock(c, n, 0), RotationDirection::AlphaBetaToAB);
      worst = std::max(worst, std::abs(fock_condensate_entropy(n) - von_neumann_entropy(partial_trace(ab, Mode::A))));
      if (n > 0) step = std::min(step, fock_condensate_entropy(n) - fock_condensate_entropy(n - 1));
    }
    out.push_back(make_check("MS.binomial_oracle", "|S_binomial - S_rotated| for n in [0, 12]", worst, 1e-10, "<="));
    out.push_back(make_check("MS.binomial_monotone", "min S(n) - S(n-1)", step, 0.0, ">"));
  }

  {  // Normal phase ED ground state is the unentangled vacuum.
    const ModelParams p{1.0, 0.5, 0.01, 0.0, 0};
    const GroundState gs = ground_state(build_hamiltonian_ab(p, default_cutoff(p)));
    out.push_back(make_check("MS.normal_vacuum", "1 - |<0,0|G>|^2 + S(G)",
                             1.0 - std::norm(gs.state.amplitude(0, 0)) + entanglement_entropy(gs.state), 1e-10,
                             "<="));
  }

  {  // Mean-field asymptotics.
    const ModelParams sf{1.0, 2.0, 0.1, 0.0, 0};
    const double nu_star = superfluid_amplitude(sf);
    std::vector<double> residual;
    for (double lambda : {4e-3, 2e-3, 1e-3}) {
      ModelParams p = sf;
      p.lambda = lambda;
      residual.push_back(stationary_amplitude(p).nu - nu_star - lambda / (4.0 * sf.g * nu_star * nu_star));
    }
    const auto e_sf = halving_exponents(residual);
    out.push_back(make_check("MF.superfluid_asymptotics", "order of nu - nu* - lambda/(4 g nu*^2) (expect 2)",
                             std::abs(e_sf.back() - 2.0), 0.2, "<=", "exponents " + fmt(e_sf[0]) + " " + fmt(e_sf[1])));
    const ModelParams nm{1.0, 0.5, 0.01, 0.0, 0};
    residual.clear();
    for (double lambda : {4e-2, 2e-2, 1e-2}) {
      ModelParams p = nm;
      p.lambda = lambda;
      residual.push_back(stationary_amplitude(p).nu - lambda / (p.omega - p.w + p.g));
    }
    const auto e_nm = halving_exponents(residual);
    out.push_back(make_check("MF.normal_asymptotics", "order of nu - lambda/(omega-w+g) (expect 3)",
                             std::abs(e_nm.back() - 3.0), 0.2, "<=", "exponents " + fmt(e_nm[0]) + " " + fmt(e_nm[1])));
  }

  {  // The returned root minimizes E0 among all real roots.
    double worst = 0.0;
    for (double w : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      for (double lambda : {0.0, 0.01, 0.11, 0.5}) {
        const ModelParams p{1.0, w, 0.1, lambda, 0};
        const CondensateSolution sol = stationary_amplitude(p);
        for (double root : sol.all_real_roots) worst = std::max(worst, sol.e0 - mean_field_energy(p, root));
        worst = std::max(worst, std::abs(stationarity_residual(p, sol.nu)));
      }
    }
    out.push_back(make_check("MF.global_minimum", "max E0(nu) - min over roots E0, and stationarity residual", worst,
                             1e-12, "<="));
  }

  {  // theta = 0 leaves the modes unentangled for all t.
    const BogoliubovParams flat{0.0, 0.7, 0.0, 0.7, 0.0};
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto c = heisenberg_coefficients(flat, 1.0, 0.37 * i);
      worst = std::max(worst, reduced_entropy(covariance_from_coefficients(c, 0.4).covariance));
    }
    out.push_back(make_check("GD.theta_zero", "max S(t) when theta = 0", worst, 1e-12, "<="));
  }

  {  // Wavefunction conventions against the Fock oracle means.
    const ModelParams p = dynamics_params();
    const DynamicsModel model(p);
    const std::vector<double> times = {0.5 / model.bogo.epsilon, 1.0 / model.bogo.epsilon};
    const auto oracle = fock_dynamics_oracle(p, times);
    double consistent = 0.0, unscaled = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto c = model.coefficients(times[i]);
      consistent = std::max(consistent, (evolved_wavefunction(c, p.nu_prime).moments().mean - oracle[i].mean).norm());
      unscaled = std::max(unscaled, (evolved_wavefunction(c, p.nu_prime, WavefunctionConvention::UnscaledLinear)
                                       .moments()
                                       .mean -
                                   oracle[i].mean)
                                      .norm());
    }
    out.push_back(make_check("GD.wavefunction_means", "mean mismatch, coherent-consistent wavefunction vs oracle",
                             consistent, 1e-8, "<=", "unscaled linear term mismatch " + fmt(unscaled)));
  }

  {  // Same config, same bytes, regardless of worker count.
    RunConfig config = default_config("phase");
    config.sweep->points = 21;
    std::ostringstream one, many;
    write_csv(one, run_phase(config, 1), "phase", config);
    write_csv(many, run_phase(config, std::max(2, jobs)), "phase", config);
    out.push_back(make_check("SC.determinism", "CSV bytes differ between 1 and several workers",
                             one.str() == many.str() ? 0 : 1, 0, "=="));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_check_group(const std::string& group, ValidationLevel level, int jobs) {
  if (group == "AC1") return check_ac1(level, jobs);
  if (group == "AC2") return check_ac2(level, jobs);
  if (group == "AC3") return check_ac3(level, jobs);
  if (group == "AC4") return check_ac4(level, jobs);
  if (group == "AC5") return check_ac5(level, jobs);
  if (group == "AC6") return check_ac6(level, jobs);
  if (group == "AC7") return check_ac7(level, jobs);
  if (group == "AC8") return check_ac8(level, jobs);
  if (group == "INV") return check_invariants(level, jobs);
  throw std::invalid_argument("run_check_group: unknown group '" + group + "'");
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["tool"] = "twomode";
  j["version"] = kToolVersion;
  j["level"] = level == ValidationLevel::Full ? "full" : "quick";
  j["passed"] = passed();
  j["seconds"] = seconds;
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    j["checks"].push_back({{"id", c.id},
                           {"criterion", c.criterion},
                           {"description", c.description},
                           {"measured", std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json()},
                           {"tolerance", c.tolerance},
                           {"comparison", c.comparison},
                           {"passed", c.passed},
                           {"detail", c.detail}});
  }
  return j.dump(2);
}

ValidationReport run_validation(ValidationLevel level, int jobs, const CheckCallback& progress) {
  const auto start = Clock::now();
  ValidationReport report{level, {}, 0.0};
  for (const char* group : {"AC1", "AC2", "AC3", "AC4", "AC5", "AC6", "AC7", "AC8", "INV"}) {
    for (CheckResult& c : run_check_group(group, level, jobs)) {
      if (progress) progress(c);
      report.checks.push_back(std::move(c));
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace twomode
