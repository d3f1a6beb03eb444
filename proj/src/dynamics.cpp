#include "twomode/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twomode {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// (x_alpha, p_alpha, x_beta, p_beta) -> (x_a, p_a, x_b, p_b).
Eigen::Matrix4d alpha_beta_to_ab() {
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  const double s = 1.0 / kSqrt2;
  r(0, 0) = s; r(0, 2) = s;
  r(1, 1) = s; r(1, 3) = s;
  r(2, 0) = s; r(2, 2) = -s;
  r(3, 1) = s; r(3, 3) = -s;
  return r;
}

}  // namespace

double EvolutionCoefficients::canonical_residual() const {
  return std::norm(f) - std::norm(f_prime) - 1.0;
}

EvolutionCoefficients heisenberg_coefficients(const BogoliubovParams& bogo, double nu, double t) {
  if (!(bogo.epsilon > 0.0)) throw std::domain_error("heisenberg_coefficients: requires epsilon > 0");
  const double c = std::cos(bogo.epsilon * t);
  const double s = std::sin(bogo.epsilon * t);
  EvolutionCoefficients out{};
  out.f = cplx(c, -std::cosh(2.0 * bogo.theta) * s);
  out.f_prime = cplx(0.0, std::sinh(2.0 * bogo.theta) * s);
  out.h = nu - nu * cplx(c, -std::exp(-2.0 * bogo.theta) * s);
  out.t = t;
  out.epsilon = bogo.epsilon;
  out.theta = bogo.theta;
  out.nu = nu;
  return out;
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0; omega(1, 0) = -1.0;
  omega(2, 3) = 1.0; omega(3, 2) = -1.0;
  return omega;
}

double uncertainty_margin(const Eigen::Matrix4d& covariance) {
  const Eigen::Matrix4cd m = covariance.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form().cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Eigen::Vector2d symplectic_eigenvalues(const Eigen::Matrix4d& covariance) {
  // Eigenvalues of i Omega V come in pairs +-mu.
  const Eigen::Matrix4cd m = cplx(0.0, 1.0) * (symplectic_form() * covariance).cast<cplx>();
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, false);
  std::vector<double> values;
  for (int i = 0; i < 4; ++i) values.push_back(std::abs(solver.eigenvalues()[i].real()));
  std::sort(values.begin(), values.end());
  return {0.5 * (values[0] + values[1]), 0.5 * (values[2] + values[3])};
}

double gaussian_mode_entropy(double mu) {
  const double upper = mu + 0.5;
  const double lower = mu - 0.5;
  if (lower <= 0.0) return 0.0;
  return upper * std::log(upper) - lower * std::log(lower);
}

double reduced_entropy(const Eigen::Matrix4d& covariance) {
  const double det = covariance.topLeftCorner<2, 2>().determinant();
  return gaussian_mode_entropy(std::sqrt(std::max(det, 0.25)));
}

GaussianState covariance_from_coefficients(const EvolutionCoefficients& coeffs, double nu_prime) {
  // alpha'(t) = (c1 x + c2 p)/sqrt2 with c1 = f + f', c2 = i(f - f').
  const cplx c1 = coeffs.f + coeffs.f_prime;
  const cplx c2 = cplx(0.0, 1.0) * (coeffs.f - coeffs.f_prime);
  Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
  s(0, 0) = c1.real(); s(0, 1) = c2.real();
  s(1, 0) = c1.imag(); s(1, 1) = c2.imag();
  // beta rotates by a phase; its vacuum covariance is invariant, so the
  // identity block is exact.
  const Eigen::Matrix4d r = alpha_beta_to_ab();
  GaussianState out;
  out.covariance = r * (0.5 * s * s.transpose()) * r.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();

  const cplx alpha_mean = coeffs.h + kSqrt2 * nu_prime * c1;
  const Eigen::Vector4d mean_alpha_beta(kSqrt2 * alpha_mean.real(), kSqrt2 * alpha_mean.imag(), 0.0, 0.0);
  out.mean = r * mean_alpha_beta;

  if (uncertainty_margin(out.covariance) < -1e-9) {
    throw std::logic_error("covariance_from_coefficients: uncertainty relation violated");
  }
  return out;
}

DynamicsModel::DynamicsModel(const ModelParams& p) : params(p), solution(stationary_amplitude(p)), bogo{} {
  if (solution.branch != Branch::Superfluid) {
    throw std::domain_error("DynamicsModel: parameters are not on the superfluid branch (omega - w + g >= 0)");
  }
  bogo = bogoliubov_params(params, solution);
}

GaussianState DynamicsModel::state(double t) const {
  return covariance_from_coefficients(coefficients(t), params.nu_prime);
}

double DynamicsModel::entropy(double t) const { return reduced_entropy(state(t).covariance); }

double dynamical_entropy(const ModelParams& params, double t) { return DynamicsModel(params).entropy(t); }

// ---------------------------------------------------------------------------

cplx EvolvedWavefunction::operator()(double x_a, double x_b) const {
  return std::exp(linear_coef * (x_a + x_b) - quad_coef * (x_a * x_a + x_b * x_b) + cross_coef * x_a * x_b);
}

GaussianState EvolvedWavefunction::moments() const {
  // psi = exp(L.x - x^T M x) = exp(-x^T (U + iW) x / 2 + L.x).
  Eigen::Matrix2cd m;
  m << quad_coef, -0.5 * cross_coef, -0.5 * cross_coef, quad_coef;
  const Eigen::Matrix2d u = 2.0 * m.real();
  const Eigen::Matrix2d w = 2.0 * m.imag();
  const Eigen::Matrix2d u_inv = u.inverse();
  const Eigen::Vector2d l_re(linear_coef.real(), linear_coef.real());
  const Eigen::Vector2d l_im(linear_coef.imag(), linear_coef.imag());

  const Eigen::Matrix2d vxx = 0.5 * u_inv;
  const Eigen::Matrix2d vxp = -0.5 * u_inv * w;
  const Eigen::Matrix2d vpp = 0.5 * (u + w * u_inv * w);
  const Eigen::Vector2d x_mean = u_inv * l_re;
  const Eigen::Vector2d p_mean = l_im - w * x_mean;

  GaussianState out;
  for (int i = 0; i < 2; ++i) {
    out.mean[2 * i] = x_mean[i];
    out.mean[2 * i + 1] = p_mean[i];
    for (int j = 0; j < 2; ++j) {
      out.covariance(2 * i, 2 * j) = vxx(i, j);
      out.covariance(2 * i + 1, 2 * j + 1) = vpp(i, j);
      out.covariance(2 * i, 2 * j + 1) = vxp(i, j);
      out.covariance(2 * j + 1, 2 * i) = vxp(i, j);
    }
  }
  return out;
}

EvolvedWavefunction evolved_wavefunction(const EvolutionCoefficients& coeffs, double nu_prime,
                                         WavefunctionConvention convention) {
  // The closed form describes Psi(., -t) through f(t), f'(t), h(t); the state
  // at forward time t therefore uses the coefficients at -t.
  const cplx f = std::conj(coeffs.f);
  const cplx fp = -coeffs.f_prime;
  const cplx h = std::conj(coeffs.h);
  const cplx denom = f - fp;

  EvolvedWavefunction out{};
  out.near_singular = std::abs(denom) < 1e-10;
  out.quad_coef = 0.5 * f / denom;
  if (convention == WavefunctionConvention::UnscaledLinear) {
    out.linear_coef = -(h - nu_prime) / denom;
    out.cross_coef = fp / denom;
  } else {
    out.linear_coef = -(h - kSqrt2 * nu_prime) / denom;
    out.cross_coef = -fp / denom;
  }
  out.normalizable = (out.quad_coef - 0.5 * out.cross_coef).real() > 0.0 &&
                     (out.quad_coef + 0.5 * out.cross_coef).real() > 0.0;
  if (!out.normalizable) {
    throw std::domain_error("evolved_wavefunction: quadratic form is not normalizable");
  }
  return out;
}

// ---------------------------------------------------------------------------

SensitivityReport short_time_sbf_sensitivity(const ModelParams& base, const std::vector<double>& lambdas,
                                             const std::vector<double>& times) {
  if (lambdas.empty()) throw std::invalid_argument("short_time_sbf_sensitivity: empty lambda list");
  SensitivityReport out;
  out.lambdas = lambdas;
  out.times = times;
  out.epsilon_ref = 0.0;
  std::vector<DynamicsModel> models;
  for (double lambda : lambdas) {
    ModelParams p = base;
    p.lambda = lambda;
    models.emplace_back(p);
    out.epsilon_ref = std::max(out.epsilon_ref, models.back().bogo.epsilon);
    const double nu = models.back().solution.nu;
    out.free_diffusion_valid.push_back(lambda < kFreeDiffusionFactor * 2.0 * p.g * nu * nu * nu);
  }
  for (const auto& model : models) {
    std::vector<double> curve;
    for (double t : times) curve.push_back(model.entropy(t));
    out.entropy.push_back(std::move(curve));
  }
  out.short_time_spread = 0.0;
  out.late_spread = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (const auto& curve : out.entropy) {
      lo = std::min(lo, curve[j]);
      hi = std::max(hi, curve[j]);
      sum += curve[j];
    }
    const double mean = sum / double(out.entropy.size());
    const double spread = mean > 0.0 ? (hi - lo) / mean : 0.0;
    out.spread.push_back(spread);
    const double phase = out.epsilon_ref * times[j];
    if (times[j] > 0.0 && phase < kShortTimeWindow) out.short_time_spread = std::max(out.short_time_spread, spread);
    if (phase >= 0.8 && phase <= 1.2) out.late_spread = std::max(out.late_spread, spread);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct OracleSetup {
  TwoModeOperator hamiltonian;
  PureState initial;
  double frame_shift;  // alpha = alpha' + frame_shift
};

OracleSetup oracle_setup(const ModelParams& params, int n_max, bool full) {
  const FockCutoff cutoff(n_max);
  if (full) {
    const TwoModeOperator h = build_sbf_hamiltonian(params, cutoff);
    TruncatedState psi0 = coherent_state(kSqrt2 * params.nu_prime, 0.0, cutoff);
    return {h, std::move(psi0.state), 0.0};
  }
  const DynamicsModel model(params);
  const auto l = ladder_operators(cutoff);
  const ModeOperator h_alpha = quadratic_alpha_hamiltonian(params, model.solution, cutoff);
  const ModeOperator h_beta = cplx(beta_frequency(params, model.solution.nu)) * l.number;
  const auto one = ModeOperator::identity(cutoff);
  const TwoModeOperator h = tensor(h_alpha, one) + tensor(one, h_beta);
  TruncatedState psi0 = coherent_state(kSqrt2 * params.nu_prime - model.solution.nu, 0.0, cutoff);
  return {h, std::move(psi0.state), model.solution.nu};
}

std::vector<FockOracleResult> oracle_at_cutoff(const ModelParams& params, const std::vector<double>& times,
                                               int n_max, bool full) {
  const OracleSetup setup = oracle_setup(params, n_max, full);
  const FockCutoff cutoff(n_max);
  const Propagator propagator(setup.hamiltonian.matrix());
  const auto l = ladder_operators(cutoff);
  const auto one = ModeOperator::identity(cutoff);
  const SparseMatrix alpha = tensor(l.annihilate, one).matrix();
  const SparseMatrix beta = tensor(one, l.annihilate).matrix();
  const int tail_start = static_cast<int>(std::floor(0.8 * n_max)) + 1;

  std::vector<FockOracleResult> out;
  for (double t : times) {
    const PureState psi(cutoff, propagator.apply(setup.initial.amplitudes(), t));
    FockOracleResult r{};
    r.cutoff = n_max;
    r.tail_weight = 0.0;
    for (int na = 0; na <= n_max; ++na) {
      for (int nb = 0; nb <= n_max; ++nb) {
        if (na >= tail_start || nb >= tail_start) r.tail_weight += std::norm(psi.amplitude(na, nb));
      }
    }
    const cplx alpha_mean = psi.amplitudes().dot(alpha * psi.amplitudes()) + setup.frame_shift;
    const cplx beta_mean = psi.amplitudes().dot(beta * psi.amplitudes());
    const Eigen::Vector4d ab(kSqrt2 * alpha_mean.real(), kSqrt2 * alpha_mean.imag(), kSqrt2 * beta_mean.real(),
                             kSqrt2 * beta_mean.imag());
    r.mean = alpha_beta_to_ab() * ab;
    r.entropy = entanglement_entropy(rotate_modes(psi, RotationDirection::AlphaBetaToAB));
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<FockOracleResult> fock_dynamics_oracle(const ModelParams& params, const std::vector<double>& times,
                                                   const FockOracleOptions& options) {
  params.validate();
  if (options.cutoff) return oracle_at_cutoff(params, times, *options.cutoff, options.full_hamiltonian);

  constexpr double kTailTarget = 1e-11;
  constexpr int kMaxCutoff = 2500;
  int n_max = 64;
  if (!options.full_hamiltonian) {
    // Squeezed pair occupations fall off like tanh(r)^n; start where the
    // Gaussian estimate already meets the target.
    const DynamicsModel model(params);
    double r_max = 0.0;
    for (double t : times) {
      const Eigen::Matrix4d v = model.state(t).covariance;
      const Eigen::Matrix2d v_alpha = 0.5 * (v.topLeftCorner<2, 2>() + v.bottomRightCorner<2, 2>() +
                                             v.topRightCorner<2, 2>() + v.bottomLeftCorner<2, 2>());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(v_alpha);
      r_max = std::max(r_max, 0.5 * std::log(2.0 * solver.eigenvalues().maxCoeff()));
    }
    const double shift = kSqrt2 * params.nu_prime - model.solution.nu;
    if (r_max > 1e-3) {
      const double pairs = std::log(kTailTarget) / (2.0 * std::log(std::tanh(r_max)));
      n_max = std::max(n_max, static_cast<int>(std::ceil(2.0 * pairs + 4.0 * shift * shift)));
    }
    n_max = std::min(n_max, kMaxCutoff);
  }
  for (;;) {
    auto results = oracle_at_cutoff(params, times, n_max, options.full_hamiltonian);
    double worst = 0.0;
    for (const auto& r : results) worst = std::max(worst, r.tail_weight);
    if (worst < kTailTarget) return results;
    if (n_max >= kMaxCutoff) {
      throw ConvergenceError("fock_dynamics_oracle: tail weight " + std::to_string(worst) +
                             " above target at cutoff " + std::to_string(n_max));
    }
    n_max = std::min(kMaxCutoff, n_max * 5 / 4);
  }
}

FockOracleResult fock_dynamics_oracle(const ModelParams& params, double t, const FockOracleOptions& options) {
  return fock_dynamics_oracle(params, std::vector<double>{t}, options).front();
}

}  // namespace twomode
