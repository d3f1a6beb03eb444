// Two-mode Kerr model: Hamiltonians in the (a,b) and (alpha,beta) bases,
// the beam-splitter mode rotation, ground-state phase classification and
// closed-form perturbative results for the symmetry-breaking field (SBF).

#pragma once

#include <optional>

#include "twomode/fock.hpp"

namespace twomode {

struct ModelParams {
  double omega = 1.0;     ///< mode frequency
  double w = 0.0;         ///< transfer strength
  double g = 0.01;        ///< Kerr strength
  double lambda = 0.0;    ///< SBF amplitude
  double nu_prime = 0.0;  ///< initial coherent amplitude (dynamics only)

  /// Throws std::invalid_argument unless omega > 0, w >= 0, g > 0,
  /// lambda >= 0, nu_prime >= 0 and all are finite.
  void validate() const;
};

/// Default truncation: max(4*ceil(nu^2), ceil((w-omega)/(2g)) + 20, 30), with
/// nu the condensate amplitude of the mean-field solution.
FockCutoff default_cutoff(const ModelParams& params, double nu = 0.0);

/// omega(n_a+n_b) - w(a^dag b + b^dag a) + g(n_a+n_b)^2.
TwoModeOperator build_hamiltonian_ab(const ModelParams& params, FockCutoff cutoff);

/// (omega-w) n_alpha + (omega+w) n_beta + g(n_alpha+n_beta)^2, first mode = alpha.
TwoModeOperator build_hamiltonian_alphabeta(const ModelParams& params, FockCutoff cutoff);

/// The (alpha,beta) Hamiltonian plus the drive -lambda(alpha^dag + alpha).
TwoModeOperator build_sbf_hamiltonian(const ModelParams& params, FockCutoff cutoff);

enum class RotationDirection { AlphaBetaToAB, ABToAlphaBeta };

/// Basis change alpha = (a+b)/sqrt2, beta = (a-b)/sqrt2 applied to a state.
/// The map is real orthogonal and an involution, so both directions coincide;
/// the flag documents intent at call sites. Photon number is conserved, so an
/// input with total occupation above `out_cutoff` loses weight; more than 1e-10
/// lost throws std::domain_error.
PureState rotate_modes(const PureState& state, RotationDirection direction,
                       std::optional<FockCutoff> out_cutoff = std::nullopt);

enum class Phase { Normal, Condensate, DegenerateBoundary };

const char* to_string(Phase phase);

struct PhaseClassification {
  Phase phase;
  /// Condensate: occupation of the ground state. Boundary: the lower of the two
  /// degenerate occupations.
  int n_alpha = 0;
  /// Boundary only: the upper degenerate occupation (n_alpha + 1).
  int n_alpha_upper = 0;
  double ground_energy = 0.0;
  /// (w - omega)/(2g).
  double occupation_ratio = 0.0;
};

/// Tie band for "closest integer" and half-integer detection, relative on
/// (w-omega)/(2g).
inline constexpr double kTieTolerance = 1e-9;

PhaseClassification classify_phase(const ModelParams& params);

/// E_n = (omega-w) n + g n^2, the alpha-sector energy with beta empty.
double alpha_sector_energy(const ModelParams& params, int n);

/// Entanglement entropy (nats) of |n>_alpha |0>_beta between a and b: the
/// Shannon entropy of the Binomial(n, 1/2) distribution.
double fock_condensate_entropy(int n_alpha);

enum class PerturbationBranch { NormalSecondOrder, CondensateSecondOrder, DegenerateFirstOrder };

const char* to_string(PerturbationBranch branch);

struct PerturbativeShift {
  double delta_e;
  PerturbationBranch branch;
  /// False once lambda >= g, where the level spreading exceeds the gap.
  bool valid;
};

/// Leading-order SBF correction to the ground energy of the unperturbed model.
PerturbativeShift perturbative_energy_shift(const ModelParams& params);

}  // namespace twomode
