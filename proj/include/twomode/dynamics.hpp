// Gaussian time evolution of the factorized coherent state |nu', nu'> under
// the quadratic mean-field Hamiltonian, and a truncated-Fock oracle for it.
//
// Quadratures: x = (a^dag + a)/sqrt2, p = i(a^dag - a)/sqrt2; the vacuum has
// variance 1/2 in each. Phase-space vectors are ordered (x_a, p_a, x_b, p_b).

#pragma once

#include <optional>
#include <vector>

#include "twomode/fock.hpp"
#include "twomode/mean_field.hpp"
#include "twomode/model.hpp"

namespace twomode {

/// Heisenberg solution alpha(t) = f alpha + f' alpha^dag + h in the unshifted frame.
struct EvolutionCoefficients {
  cplx f;
  cplx f_prime;
  cplx h;
  double t;
  double epsilon;
  double theta;
  double nu;

  /// |f|^2 - |f'|^2 - 1, zero for a canonical transformation.
  double canonical_residual() const;
};

EvolutionCoefficients heisenberg_coefficients(const BogoliubovParams& bogo, double nu, double t);

struct GaussianState {
  Eigen::Vector4d mean;
  Eigen::Matrix4d covariance;
};

/// Standard symplectic form for (x_a, p_a, x_b, p_b).
Eigen::Matrix4d symplectic_form();

/// Smallest eigenvalue of covariance + (i/2) Omega; >= 0 for a physical state.
double uncertainty_margin(const Eigen::Matrix4d& covariance);

/// Symplectic eigenvalues of a two-mode covariance, ascending.
Eigen::Vector2d symplectic_eigenvalues(const Eigen::Matrix4d& covariance);

/// Von Neumann entropy of a single-mode Gaussian state with symplectic
/// eigenvalue mu >= 1/2: (mu+1/2) ln(mu+1/2) - (mu-1/2) ln(mu-1/2).
double gaussian_mode_entropy(double mu);

/// Entropy of mode a from the reduced 2x2 block of a two-mode covariance.
double reduced_entropy(const Eigen::Matrix4d& covariance);

/// State at forward time coeffs.t evolved from |nu', nu'>. The alpha
/// quadratures transform linearly through (f, f'); beta stays in vacuum up to
/// a phase. Throws std::logic_error if the uncertainty relation is violated by
/// more than 1e-9.
GaussianState covariance_from_coefficients(const EvolutionCoefficients& coeffs, double nu_prime);

/// Mean-field solution and Bogoliubov parameters for the dynamics. Requires
/// the superfluid branch and lambda > 0.
struct DynamicsModel {
  ModelParams params;
  CondensateSolution solution;
  BogoliubovParams bogo;

  explicit DynamicsModel(const ModelParams& params);

  double period() const { return M_PI / bogo.epsilon; }
  EvolutionCoefficients coefficients(double t) const { return heisenberg_coefficients(bogo, solution.nu, t); }
  GaussianState state(double t) const;
  double entropy(double t) const;
};

/// S(t) of mode a for the state evolved from |nu', nu'> (nats).
double dynamical_entropy(const ModelParams& params, double t);

/// Which linear-term convention the closed-form wavefunction uses.
enum class WavefunctionConvention {
  /// Linear coefficient -(h - nu')/(f - f'), cross term +f'/(f - f').
  UnscaledLinear,
  /// Derived from alpha(-t)|Phi(t)> = nu' sqrt2 |Phi(t)>:
  /// linear -(h - sqrt2 nu')/(f - f'), cross term -f'/(f - f').
  CoherentConsistent,
};

/// Psi(x_a, x_b) = exp[linear (x_a + x_b) - quad (x_a^2 + x_b^2) + cross x_a x_b].
struct EvolvedWavefunction {
  cplx linear_coef;
  cplx quad_coef;
  cplx cross_coef;
  /// |f - f'| < 1e-10.
  bool near_singular;
  /// Re(quad -+ cross/2) > 0.
  bool normalizable;

  cplx operator()(double x_a, double x_b) const;
  /// Means and covariance implied by the Gaussian wavefunction.
  GaussianState moments() const;
};

/// Wavefunction of the state at forward time coeffs.t (the closed form is in
/// terms of the coefficients at -t; the sign mapping happens here). Throws
/// std::domain_error when the quadratic form is not normalizable.
EvolvedWavefunction evolved_wavefunction(const EvolutionCoefficients& coeffs, double nu_prime,
                                         WavefunctionConvention convention = WavefunctionConvention::CoherentConsistent);

struct SensitivityReport {
  std::vector<double> lambdas;
  std::vector<double> times;
  /// entropy[i][j] = S(times[j]) at lambdas[i].
  std::vector<std::vector<double>> entropy;
  /// Reference rate used for the windows: the largest epsilon in the list.
  double epsilon_ref;
  /// Max over t of (max_lambda S - min_lambda S)/mean_lambda S.
  double short_time_spread;  ///< epsilon_ref t < 0.3, t > 0
  double late_spread;        ///< 0.8 <= epsilon_ref t <= 1.2
  /// lambda < 0.1 * 2 g nu^3 for each lambda.
  std::vector<bool> free_diffusion_valid;
  /// Spread as a function of time, one entry per time.
  std::vector<double> spread;
};

SensitivityReport short_time_sbf_sensitivity(const ModelParams& base, const std::vector<double>& lambdas,
                                             const std::vector<double>& times);

inline constexpr double kShortTimeWindow = 0.3;
inline constexpr double kFreeDiffusionFactor = 0.1;

struct FockOracleOptions {
  /// Per-mode truncation; unset picks one where the evolved state's weight
  /// above 0.8 n_max is below 1e-11.
  std::optional<int> cutoff;
  /// Evolve under the full H_lambda instead of the quadratic theory.
  /// Exploratory only; not used by any acceptance check.
  bool full_hamiltonian = false;
};

struct FockOracleResult {
  double entropy;
  int cutoff;
  /// Norm-squared of the evolved state on single-mode levels above 0.8 n_max.
  double tail_weight;
  /// <x_a>, <p_a>, <x_b>, <p_b> in the unshifted frame.
  Eigen::Vector4d mean;
};

/// Entropy of mode a after evolving |nu' sqrt2>_alpha |0>_beta for time t in
/// truncated Fock space, rotated to (a, b) and partial-traced.
FockOracleResult fock_dynamics_oracle(const ModelParams& params, double t, const FockOracleOptions& options = {});

/// Same, evaluated at several times with one propagator.
std::vector<FockOracleResult> fock_dynamics_oracle(const ModelParams& params, const std::vector<double>& times,
                                                   const FockOracleOptions& options = {});

}  // namespace twomode
