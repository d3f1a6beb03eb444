#include "twomode/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twomode {

const char* to_string(Branch branch) {
  return branch == Branch::Normal ? "normal" : "superfluid";
}

double mean_field_energy(const ModelParams& params, double nu) {
  const double nu2 = nu * nu;
  return (params.omega - params.w + params.g) * nu2 + params.g * nu2 * nu2 - 2.0 * params.lambda * nu;
}

double stationarity_residual(const ModelParams& params, double nu) {
  return (params.omega - params.w + params.g) * nu + 2.0 * params.g * nu * nu * nu - params.lambda;
}

double superfluid_amplitude(const ModelParams& params) {
  const double excess = params.w - params.omega - params.g;
  if (!(excess > 0.0)) throw std::domain_error("superfluid_amplitude: requires omega - w + g < 0");
  return std::sqrt(excess / (2.0 * params.g));
}

std::vector<double> depressed_cubic_roots(double c3, double c1, double c0) {
  if (c3 == 0.0) throw std::invalid_argument("depressed_cubic_roots: leading coefficient is zero");
  const double p = c1 / c3;
  const double q = c0 / c3;
  std::vector<double> roots;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  if (p == 0.0) {
    roots.push_back(std::cbrt(-q));
  } else if (disc > 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(phi - 2.0 * M_PI * k / 3.0));
  } else if (disc == 0.0) {
    roots.push_back(3.0 * q / p);
    roots.push_back(-1.5 * q / p);
  } else if (p < 0.0) {
    const double s = std::sqrt(-p / 3.0);
    const double arg = std::max(1.0, -1.5 * std::abs(q) / (p * s));
    roots.push_back(-2.0 * std::copysign(1.0, q) * s * std::cosh(std::acosh(arg) / 3.0));
  } else {
    const double s = std::sqrt(p / 3.0);
    roots.push_back(-2.0 * s * std::sinh(std::asinh(1.5 * q / (p * s)) / 3.0));
  }

  const auto f = [&](double x) { return c3 * x * x * x + c1 * x + c0; };
  const auto df = [&](double x) { return 3.0 * c3 * x * x + c1; };
  for (double& x : roots) {
    for (int it = 0; it < 60; ++it) {
      const double fx = f(x);
      const double d = df(x);
      if (fx == 0.0 || d == 0.0) break;
      const double step = fx / d;
      const double next = x - step;
      if (std::abs(f(next)) >= std::abs(fx)) break;
      x = next;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }),
              roots.end());
  return roots;
}

CondensateSolution stationary_amplitude(const ModelParams& params) {
  params.validate();
  const double linear = params.omega - params.w + params.g;
  CondensateSolution out{};
  out.branch = linear < 0.0 ? Branch::Superfluid : Branch::Normal;

  if (params.lambda == 0.0 && linear < 0.0) {
    const double star = superfluid_amplitude(params);
    out.all_real_roots = {-star, 0.0, star};
    out.nu = star;
    out.e0 = mean_field_energy(params, star);
    out.lambda_zero_limit = true;
    return out;
  }

  out.all_real_roots = depressed_cubic_roots(2.0 * params.g, linear, -params.lambda);
  double best = std::numeric_limits<double>::infinity();
  for (double root : out.all_real_roots) {
    const double e = mean_field_energy(params, root);
    const double tie = 1e-14 * std::max(1.0, std::abs(e));
    if (e < best - tie || (std::abs(e - best) <= tie && root >= 0.0 && out.nu < 0.0)) {
      best = std::min(best, e);
      out.nu = root;
    }
  }
  out.e0 = mean_field_energy(params, out.nu);
  const double residual = stationarity_residual(params, out.nu);
  if (std::abs(residual) > 1e-12) {
    throw ConvergenceError("stationary_amplitude: cubic residual " + std::to_string(residual));
  }
  return out;
}

BogoliubovParams bogoliubov_params(const ModelParams& params, const CondensateSolution& solution) {
  if (params.lambda == 0.0 || solution.lambda_zero_limit) {
    throw std::domain_error("bogoliubov_params: squeezing divergence: tanh 2theta -> -1 at lambda = 0");
  }
  if (!(solution.nu > 0.0)) throw std::domain_error("bogoliubov_params: requires nu > 0");
  const double nu = solution.nu;
  const double drive = params.lambda / nu;
  BogoliubovParams out{};
  out.b_coef = params.g * nu * nu;
  out.a_coef = drive + 2.0 * out.b_coef;
  out.epsilon = std::sqrt(drive * (drive + 4.0 * out.b_coef));
  out.theta = 0.5 * std::atanh(-2.0 * out.b_coef / out.a_coef);
  out.zero_point = 0.5 * (out.epsilon - out.a_coef);
  return out;
}

ModeOperator quadratic_alpha_hamiltonian(const ModelParams& params, const CondensateSolution& solution,
                                         FockCutoff cutoff) {
  if (!(solution.nu > 0.0)) throw std::domain_error("quadratic_alpha_hamiltonian: requires nu > 0");
  const auto l = ladder_operators(cutoff);
  const double b = params.g * solution.nu * solution.nu;
  return cplx(params.lambda / solution.nu + 2.0 * b) * l.number +
         cplx(b) * (l.create * l.create + l.annihilate * l.annihilate);
}

Vector squeezed_vacuum(double theta, int n_max) {
  Vector c = Vector::Zero(n_max + 1);
  const double t = std::tanh(theta);
  c[0] = 1.0 / std::sqrt(std::cosh(theta));
  for (int n = 2; n <= n_max; n += 2) c[n] = c[n - 2] * t * std::sqrt((n - 1.0) / n);
  return c;
}

double squeezed_ground_entropy(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("squeezed_ground_entropy: theta must be finite");
  const double c2 = std::pow(std::cosh(0.5 * theta), 2);
  const double s2 = std::pow(std::sinh(0.5 * theta), 2);
  if (s2 == 0.0) return 0.0;
  return c2 * std::log(c2) - s2 * std::log(s2);
}

double GroundWavefunction::operator()(double x_a, double x_b) const {
  const double sum = x_a + x_b + 2.0 * nu;
  const double diff = x_a - x_b;
  return std::exp(-0.25 * std::exp(-2.0 * theta) * sum * sum - 0.25 * diff * diff);
}

Eigen::Matrix2d GroundWavefunction::position_covariance() const {
  const double var_sum = 0.5 * std::exp(2.0 * theta);  // (x_a + x_b)/sqrt2
  const double var_diff = 0.5;                          // (x_a - x_b)/sqrt2
  Eigen::Matrix2d cov;
  cov << 0.5 * (var_sum + var_diff), 0.5 * (var_sum - var_diff), 0.5 * (var_sum - var_diff),
      0.5 * (var_sum + var_diff);
  return cov;
}

GroundWavefunction ground_wavefunction(const ModelParams&, const CondensateSolution& solution,
                                       const BogoliubovParams& bogo) {
  return {bogo.theta, solution.nu, 1.0 / std::sqrt(M_PI * std::exp(bogo.theta))};
}

double beta_frequency(const ModelParams& params, double nu) {
  return params.omega + params.w + params.g + 2.0 * params.g * nu * nu;
}

ShiftedFrameTerms shifted_frame_terms(const ModelParams& params, double nu, FockCutoff cutoff) {
  const auto l = ladder_operators(cutoff);
  const auto one = ModeOperator::identity(cutoff);
  const TwoModeOperator a = tensor(l.annihilate, one);
  const TwoModeOperator ad = tensor(l.create, one);
  const TwoModeOperator b = tensor(one, l.annihilate);
  const TwoModeOperator bd = tensor(one, l.create);
  const TwoModeOperator na = tensor(l.number, one);
  const TwoModeOperator nb = tensor(one, l.number);
  const double g = params.g;
  const double linear = params.omega - params.w + g;
  return {
      linear * nu * nu + g * std::pow(nu, 4) - 2.0 * params.lambda * nu,
      cplx(linear * nu + 2.0 * g * nu * nu * nu - params.lambda) * (ad + a),
      cplx(linear) * na + cplx(beta_frequency(params, nu)) * nb +
          cplx(g * nu * nu) * (cplx(4.0) * na + ad * ad + a * a),
      cplx(2.0 * g * nu) * ((ad + a) * nb + ad * ad * a + ad * a * a),
      cplx(g) * (ad * ad * a * a + bd * bd * b * b + cplx(2.0) * (nb * na)),
  };
}

AnharmonicDiagnostics anharmonic_diagnostics(const ModelParams& params, const CondensateSolution& solution,
                                             const BogoliubovParams& bogo, FockCutoff cutoff) {
  const ShiftedFrameTerms terms = shifted_frame_terms(params, solution.nu, cutoff);
  Vector vacuum = Vector::Zero(cutoff.mode_dim());
  vacuum[0] = 1.0;
  const PureState state = PureState::product(cutoff, squeezed_vacuum(bogo.theta, cutoff.n_max()), vacuum);
  AnharmonicDiagnostics out{};
  out.h3_expectation = state.expectation(terms.h3).real();
  out.h4_expectation = state.expectation(terms.h4).real();
  out.relative_size = (std::abs(out.h3_expectation) + std::abs(out.h4_expectation)) /
                      std::max(std::abs(bogo.zero_point), 1e-300);
  return out;
}

WeakCouplingFlags weak_coupling_flags(const ModelParams& params, const BogoliubovParams& bogo) {
  return {params.g < params.lambda, 2.0 * bogo.b_coef / bogo.a_coef < kSqueezingLimit};
}

std::vector<EntropyCurvePoint> sbf_entropy_curve(const ModelParams& base, const std::vector<double>& w_values) {
  if (!(base.lambda > 0.0)) throw std::invalid_argument("sbf_entropy_curve: requires lambda > 0");
  std::vector<EntropyCurvePoint> out;
  out.reserve(w_values.size());
  for (double w : w_values) {
    ModelParams p = base;
    p.w = w;
    const CondensateSolution sol = stationary_amplitude(p);
    const BogoliubovParams bogo = bogoliubov_params(p, sol);
    out.push_back({w / (p.omega + p.g), w, sol, bogo, squeezed_ground_entropy(bogo.theta)});
  }
  return out;
}

namespace {

QuadraticGroundCheck quadratic_ground_at(const ModelParams& params, const CondensateSolution& solution,
                                         const BogoliubovParams& bogo, int n_max) {
  const FockCutoff cutoff(n_max);
  const ModeOperator h = quadratic_alpha_hamiltonian(params, solution, cutoff);
  const auto pairs = lowest_eigenpairs(h.matrix(), 2);
  QuadraticGroundCheck out{};
  out.cutoff = n_max;
  out.ground_energy = pairs[0].value;
  out.gap = pairs[1].value - pairs[0].value;

  Vector ground = pairs[0].vector;
  // Fix the global phase so the vacuum amplitude is real and positive.
  if (std::abs(ground[0]) > 0.0) ground *= std::conj(ground[0]) / std::abs(ground[0]);
  Vector vacuum = Vector::Zero(cutoff.mode_dim());
  vacuum[0] = 1.0;
  const PureState in_alpha = PureState::product(cutoff, ground, vacuum);
  out.entropy = entanglement_entropy(rotate_modes(in_alpha, RotationDirection::AlphaBetaToAB));

  const double plus = std::norm(ground.dot(squeezed_vacuum(bogo.theta, n_max)));
  const double minus = std::norm(ground.dot(squeezed_vacuum(-bogo.theta, n_max)));
  out.overlap = std::max(plus, minus);
  out.matching_theta_sign = plus >= minus ? 1 : -1;
  return out;
}

}  // namespace

QuadraticGroundCheck quadratic_ground_check(const ModelParams& params, const CondensateSolution& solution,
                                            const BogoliubovParams& bogo, std::optional<int> cutoff) {
  int n = cutoff.value_or(default_cutoff(params, solution.nu).n_max());
  constexpr int kMaxCutoff = 1200;
  for (;;) {
    QuadraticGroundCheck here = quadratic_ground_at(params, solution, bogo, n);
    const QuadraticGroundCheck next = quadratic_ground_at(params, solution, bogo, n + 10);
    const double change = std::max({std::abs(here.ground_energy - next.ground_energy),
                                    std::abs(here.gap - next.gap), std::abs(here.entropy - next.entropy)});
    if (cutoff || change < 1e-11 || n >= kMaxCutoff) {
      here.converged = change < 1e-8;
      return here;
    }
    n = std::min(kMaxCutoff, n + std::max(20, n / 2));
  }
}

}  // namespace twomode
