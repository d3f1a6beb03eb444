// Truncated two-mode Fock space: operators, states, eigensolver, propagation
// and entanglement measures.
//
// Basis convention: the single-mode basis is |0>..|n_max>; two-mode states
// are stored row-major over mode a then mode b, index = n_a*(n_max+1) + n_b.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace twomode {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Vector = Eigen::VectorXcd;

/// Raised when an iterative scheme or a truncated basis fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FockCutoff {
 public:
  explicit FockCutoff(int n_max);

  int n_max() const { return n_max_; }
  int mode_dim() const { return n_max_ + 1; }
  int two_mode_dim() const { return (n_max_ + 1) * (n_max_ + 1); }

  bool operator==(const FockCutoff&) const = default;

 private:
  int n_max_;
};

/// Operator on one truncated mode.
class ModeOperator {
 public:
  ModeOperator(FockCutoff cutoff, SparseMatrix matrix);

  static ModeOperator identity(FockCutoff cutoff);

  FockCutoff cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.mode_dim(); }
  const SparseMatrix& matrix() const { return matrix_; }
  ModeOperator adjoint() const;

  friend ModeOperator operator+(const ModeOperator& x, const ModeOperator& y);
  friend ModeOperator operator-(const ModeOperator& x, const ModeOperator& y);
  friend ModeOperator operator*(const ModeOperator& x, const ModeOperator& y);
  friend ModeOperator operator*(cplx s, const ModeOperator& x);

 private:
  FockCutoff cutoff_;
  SparseMatrix matrix_;
};

/// Operator on the two-mode space (dimension (n_max+1)^2).
class TwoModeOperator {
 public:
  TwoModeOperator(FockCutoff cutoff, SparseMatrix matrix);

  static TwoModeOperator identity(FockCutoff cutoff);

  FockCutoff cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.two_mode_dim(); }
  const SparseMatrix& matrix() const { return matrix_; }
  TwoModeOperator adjoint() const;

  friend TwoModeOperator operator+(const TwoModeOperator& x, const TwoModeOperator& y);
  friend TwoModeOperator operator-(const TwoModeOperator& x, const TwoModeOperator& y);
  friend TwoModeOperator operator*(const TwoModeOperator& x, const TwoModeOperator& y);
  friend TwoModeOperator operator*(cplx s, const TwoModeOperator& x);

 private:
  FockCutoff cutoff_;
  SparseMatrix matrix_;
};

/// Normalized two-mode pure state.
class PureState {
 public:
  /// Normalizes `amplitudes`; throws if the vector is zero or has the wrong size.
  PureState(FockCutoff cutoff, Vector amplitudes);

  static PureState fock(FockCutoff cutoff, int n_a, int n_b);
  /// Product state |phi_a> (x) |phi_b> of two single-mode vectors.
  static PureState product(FockCutoff cutoff, const Vector& mode_a, const Vector& mode_b);

  FockCutoff cutoff() const { return cutoff_; }
  const Vector& amplitudes() const { return amplitudes_; }
  int index(int n_a, int n_b) const { return n_a * cutoff_.mode_dim() + n_b; }
  cplx amplitude(int n_a, int n_b) const { return amplitudes_[index(n_a, n_b)]; }

  /// Amplitudes reshaped as the (n_a x n_b) coefficient matrix.
  Eigen::MatrixXcd coefficient_matrix() const;

  cplx expectation(const TwoModeOperator& op) const;
  cplx overlap(const PureState& other) const;

 private:
  FockCutoff cutoff_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10) and unit trace (1e-8).
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  double trace() const { return entries_.trace().real(); }
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXcd entries_;
};

enum class Mode { A, B };

struct LadderOperators {
  ModeOperator annihilate;
  ModeOperator create;
  ModeOperator number;
};

/// a|n> = sqrt(n)|n-1>. The truncation drops create|n_max>, so [a, a^dag]
/// equals the identity except for its (n_max, n_max) entry, which is -n_max.
LadderOperators ladder_operators(FockCutoff cutoff);

TwoModeOperator tensor(const ModeOperator& op_a, const ModeOperator& op_b);

/// ||H - H^dag|| / ||H|| (Frobenius); zero for the zero operator.
double hermiticity_defect(const SparseMatrix& h);

// ---------------------------------------------------------------------------
// Eigensolver

struct EigenOptions {
  /// Blocks up to this size are diagonalized densely, larger ones by Lanczos.
  int dense_limit = 4000;
  double residual_tol = 1e-10;
  /// Relative energy window inside which levels count as degenerate.
  double degeneracy_tol = 1e-9;
  int lanczos_max_basis = 400;
  int lanczos_max_restarts = 50;
};

/// Connected components of the sparsity graph of a square matrix. Each block
/// lists its indices in ascending order; blocks are ordered by first index.
std::vector<std::vector<int>> connected_blocks(const SparseMatrix& h);

struct Eigenpair {
  double value;
  Vector vector;
};

/// Lowest `count` eigenpairs of a Hermitian matrix, ascending. Exploits block
/// structure; eigenvalues are refined as Rayleigh quotients of the returned
/// vectors.
std::vector<Eigenpair> lowest_eigenpairs(const SparseMatrix& h, int count,
                                         const EigenOptions& options = {});

/// Lanczos with full reorthogonalization and explicit restarts. Deterministic
/// start vector. Throws ConvergenceError when the residual target is missed.
std::vector<Eigenpair> lanczos_lowest(const SparseMatrix& h, int count,
                                      const EigenOptions& options = {});

struct GroundState {
  double energy;
  PureState state;
  /// Orthonormal basis of the (numerically) degenerate ground space.
  std::vector<PureState> multiplet;
  /// Distance to the first level above the ground multiplet.
  double gap;
};

GroundState ground_state(const TwoModeOperator& h, const EigenOptions& options = {});

// ---------------------------------------------------------------------------
// Time evolution

struct PropagationOptions {
  int dense_limit = 4000;
  int krylov_dim = 40;
  double tolerance = 1e-12;
};

/// exp(-i H t) on a fixed Hermitian matrix. Block structure is detected once;
/// blocks small enough are diagonalized densely and reused across times,
/// larger blocks are stepped with a Lanczos-Krylov exponential.
class Propagator {
 public:
  explicit Propagator(SparseMatrix h, PropagationOptions options = {});

  Vector apply(const Vector& psi, double t) const;

 private:
  struct Block {
    std::vector<int> indices;
    bool dense = false;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    SparseMatrix sub;
  };

  SparseMatrix h_;
  PropagationOptions options_;
  mutable std::vector<Block> blocks_;
};

/// Krylov approximation of exp(-i H t) v with adaptive substeps.
Vector krylov_expm_apply(const SparseMatrix& h, const Vector& v, double t,
                         int krylov_dim = 40, double tolerance = 1e-12);

PureState propagate(const TwoModeOperator& h, const PureState& psi0, double t,
                    const PropagationOptions& options = {});

// ---------------------------------------------------------------------------
// States and entropies

struct TruncatedState {
  PureState state;
  /// Norm-squared of the untruncated state lying above n_max.
  double truncation_weight;
};

/// Single-mode coherent-state amplitudes on |0>..|n_max>, not renormalized.
Vector coherent_amplitudes(cplx amplitude, int n_max);

/// |amplitude_a> (x) |amplitude_b>, renormalized after truncation. Requires
/// |amplitude|^2 <= n_max/4 for each mode.
TruncatedState coherent_state(cplx amplitude_a, cplx amplitude_b, FockCutoff cutoff);

DensityMatrix partial_trace(const PureState& state, Mode keep);

/// -sum p ln p over the spectrum in nats; eigenvalues below 1e-14 contribute 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Same quantity from the Schmidt coefficients of a pure state.
double schmidt_entropy(const PureState& state);

/// Entropy of mode a for a state whose weight sits at low occupations:
/// trailing Fock levels holding less than 1e-16 in total are dropped before
/// the reduced matrix is diagonalized.
double entanglement_entropy(const PureState& state);

/// -sum p ln p for a probability vector, with the same clamping rule.
double shannon_entropy(const Eigen::VectorXd& probabilities);

/// Converts an entropy in nats to bits.
inline double nats_to_bits(double s) { return s / 0.69314718055994530942; }

}  // namespace twomode
