// Shifted-frame mean-field theory with a symmetry-breaking field: condensate
// amplitude, Bogoliubov diagonalization of the quadratic alpha Hamiltonian and
// the entanglement of its squeezed ground state.

#pragma once

#include <functional>
#include <vector>

#include "twomode/fock.hpp"
#include "twomode/model.hpp"

namespace twomode {

enum class Branch { Normal, Superfluid };

const char* to_string(Branch branch);

struct CondensateSolution {
  double nu;   ///< condensate amplitude
  double e0;   ///< mean-field energy at nu
  Branch branch;
  /// Every real root of the stationarity cubic, ascending.
  std::vector<double> all_real_roots;
  /// lambda == 0 on the superfluid side: nu = nu* exactly, but the minimum is
  /// degenerate under nu -> -nu and Bogoliubov parameters are undefined.
  bool lambda_zero_limit = false;
};

struct BogoliubovParams {
  double theta;       ///< squeezing parameter, tanh(2 theta) = -2B/A
  double epsilon;     ///< quasiparticle energy sqrt(A^2 - 4B^2)
  double zero_point;  ///< (epsilon - A)/2
  double a_coef;      ///< A = lambda/nu + 2 g nu^2
  double b_coef;      ///< B = g nu^2
};

/// E0(nu) = (omega-w+g) nu^2 + g nu^4 - 2 lambda nu.
double mean_field_energy(const ModelParams& params, double nu);

/// Residual (omega-w+g) nu + 2 g nu^3 - lambda of the stationarity condition.
double stationarity_residual(const ModelParams& params, double nu);

/// nu* = sqrt((w-omega-g)/(2g)); requires omega - w + g < 0.
double superfluid_amplitude(const ModelParams& params);

/// All real roots of c3 x^3 + c1 x + c0 = 0 (c3 != 0), polished by Newton
/// steps, ascending.
std::vector<double> depressed_cubic_roots(double c3, double c1, double c0);

/// Global minimizer of E0 over the real stationary points.
CondensateSolution stationary_amplitude(const ModelParams& params);

/// Throws std::domain_error for lambda == 0 or nu <= 0 (squeezing divergence:
/// tanh 2theta -> -1 on the superfluid side).
BogoliubovParams bogoliubov_params(const ModelParams& params, const CondensateSolution& solution);

/// (lambda/nu) n + g nu^2 (2n + alpha^dag^2 + alpha^2) on one truncated mode.
ModeOperator quadratic_alpha_hamiltonian(const ModelParams& params, const CondensateSolution& solution,
                                         FockCutoff cutoff);

/// exp[(theta/2)(alpha^dag^2 - alpha^2)]|0>, closed form on |0>..|n_max>.
Vector squeezed_vacuum(double theta, int n_max);

/// S(theta) = cosh^2(theta/2) ln cosh^2(theta/2) - sinh^2(theta/2) ln sinh^2(theta/2).
double squeezed_ground_entropy(double theta);

/// Position-space ground state of the mean-field theory in the (a,b) modes,
/// exp{-(e^{-2theta}/4)[(x_a+x_b)+2nu]^2 - (x_a-x_b)^2/4}.
struct GroundWavefunction {
  double theta;
  double nu;
  /// 1/sqrt(pi e^theta), so normalization * psi has unit L2 norm.
  double normalization;

  double operator()(double x_a, double x_b) const;
  /// Peak position (x_a, x_b) = (-nu, -nu).
  std::pair<double, double> peak() const { return {-nu, -nu}; }
  /// Covariance of (x_a, x_b) under |psi|^2.
  Eigen::Matrix2d position_covariance() const;
};

GroundWavefunction ground_wavefunction(const ModelParams& params, const CondensateSolution& solution,
                                       const BogoliubovParams& bogo);

/// Cubic, quartic pieces of the shifted-frame expansion; only their size in
/// the squeezed ground state is used, as a diagnostic.
struct AnharmonicDiagnostics {
  double h3_expectation;
  double h4_expectation;
  /// |<H3>| + |<H4>| relative to |epsilon_0|.
  double relative_size;
};

AnharmonicDiagnostics anharmonic_diagnostics(const ModelParams& params, const CondensateSolution& solution,
                                             const BogoliubovParams& bogo, FockCutoff cutoff);

/// Shifted-frame pieces of H_lambda(alpha -> alpha + nu) on the two-mode
/// (alpha, beta) space, normal ordered. `h2` carries the beta frequency
/// omega + w + g + 2 g nu^2 that the expansion of g N^2 produces.
struct ShiftedFrameTerms {
  double e0;
  TwoModeOperator h1, h2, h3, h4;
};

ShiftedFrameTerms shifted_frame_terms(const ModelParams& params, double nu, FockCutoff cutoff);

/// Frequency of the decoupled beta mode in the shifted frame.
double beta_frequency(const ModelParams& params, double nu);

struct WeakCouplingFlags {
  /// g < lambda: the small-nonlinearity regime.
  bool small_nonlinearity;
  /// |tanh 2theta| = 2B/A below kSqueezingLimit: away from the free-diffusion
  /// divergence.
  bool squeezing_regular;
};

inline constexpr double kSqueezingLimit = 0.999;

WeakCouplingFlags weak_coupling_flags(const ModelParams& params, const BogoliubovParams& bogo);

struct EntropyCurvePoint {
  double ratio;  ///< w/(omega+g)
  double w;
  CondensateSolution solution;
  BogoliubovParams bogo;
  double entropy;
};

/// Entropy of the squeezed mean-field ground state along a list of w values
/// at fixed omega, g, lambda (lambda > 0).
std::vector<EntropyCurvePoint> sbf_entropy_curve(const ModelParams& base, const std::vector<double>& w_values);

struct QuadraticGroundCheck {
  double ground_energy;
  double gap;
  /// Entropy of the ED ground state placed in alpha, rotated to (a,b).
  double entropy;
  /// max(|<ED|squeezed(theta)>|^2, |<ED|squeezed(-theta)>|^2) and the sign that won.
  double overlap;
  int matching_theta_sign;
  int cutoff;
  bool converged;
};

/// ED oracle for the quadratic alpha Hamiltonian. With `cutoff` unset the
/// single-mode truncation grows from the default until a +10 recheck moves
/// energy, gap and entropy by less than 1e-9.
QuadraticGroundCheck quadratic_ground_check(const ModelParams& params, const CondensateSolution& solution,
                                            const BogoliubovParams& bogo, std::optional<int> cutoff = std::nullopt);

}  // namespace twomode
