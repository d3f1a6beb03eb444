#include "twomode/fock.hpp"

#include <cmath>
#include <string>

namespace twomode {

namespace {

void require_same_cutoff(FockCutoff x, FockCutoff y, const char* what) {
  if (!(x == y)) {
    throw std::invalid_argument(std::string(what) + ": cutoff mismatch (" +
                                std::to_string(x.n_max()) + " vs " +
                                std::to_string(y.n_max()) + ")");
  }
}

void require_dim(const SparseMatrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(dim) +
                                "x" + std::to_string(dim) + " matrix");
  }
}

SparseMatrix sparse_identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

}  // namespace

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("FockCutoff: n_max must be non-negative");
}

ModeOperator::ModeOperator(FockCutoff cutoff, SparseMatrix matrix)
    : cutoff_(cutoff), matrix_(std::move(matrix)) {
  require_dim(matrix_, cutoff_.mode_dim(), "ModeOperator");
  matrix_.makeCompressed();
}

ModeOperator ModeOperator::identity(FockCutoff cutoff) {
  return {cutoff, sparse_identity(cutoff.mode_dim())};
}

ModeOperator ModeOperator::adjoint() const { return {cutoff_, SparseMatrix(matrix_.adjoint())}; }

ModeOperator operator+(const ModeOperator& x, const ModeOperator& y) {
  require_same_cutoff(x.cutoff_, y.cutoff_, "ModeOperator +");
  return {x.cutoff_, SparseMatrix(x.matrix_ + y.matrix_)};
}

ModeOperator operator-(const ModeOperator& x, const ModeOperator& y) {
  require_same_cutoff(x.cutoff_, y.cutoff_, "ModeOperator -");
  return {x.cutoff_, SparseMatrix(x.matrix_ - y.matrix_)};
}

ModeOperator operator*(const ModeOperator& x, const ModeOperator& y) {
  require_same_cutoff(x.cutoff_, y.cutoff_, "ModeOperator *");
  return {x.cutoff_, SparseMatrix(x.matrix_ * y.matrix_)};
}

ModeOperator operator*(cplx s, const ModeOperator& x) {
  return {x.cutoff_, SparseMatrix(s * x.matrix_)};
}

TwoModeOperator::TwoModeOperator(FockCutoff cutoff, SparseMatrix matrix)
    : cutoff_(cutoff), matrix_(std::move(matrix)) {
  require_dim(matrix_, cutoff_.two_mode_dim(), "TwoModeOperator");
  matrix_.makeCompressed();
}

TwoModeOperator TwoModeOperator::identity(FockCutoff cutoff) {
  return {cutoff, sparse_identity(cutoff.two_mode_dim())};
}

TwoModeOperator TwoModeOperator::adjoint() const {
  return {cutoff_, SparseMatrix(matrix_.adjoint())};
}

TwoModeOperator operator+(const TwoModeOperator& x, const TwoModeOperator& y) {
  require_same_cutoff(x.cutoff_, y.cutoff_, "TwoModeOperator +");
  return {x.cutoff_, SparseMatrix(x.matrix_ + y.matrix_)};
}

TwoModeOperator operator-(const TwoModeOperator& x, const TwoModeOperator& y) {
  require_same_cutoff(x.cutoff_, y.cutoff_, "TwoModeOperator -");
  return {x.cutoff_, SparseMatrix(x.matrix_ - y.matrix_)};
}

TwoModeOperator operator*(const TwoModeOperator& x, const TwoModeOperator& y) {
  require_same_cutoff(x.cutoff_, y.cutoff_, "TwoModeOperator *");
  return {x.cutoff_, SparseMatrix(x.matrix_ * y.matrix_)};
}

TwoModeOperator operator*(cplx s, const TwoModeOperator& x) {
  return {x.cutoff_, SparseMatrix(s * x.matrix_)};
}

LadderOperators ladder_operators(FockCutoff cutoff) {
  const int dim = cutoff.mode_dim();
  SparseMatrix a(dim, dim);
  std::vector<Eigen::Triplet<cplx>> entries;
  for (int n = 1; n < dim; ++n) entries.emplace_back(n - 1, n, std::sqrt(double(n)));
  a.setFromTriplets(entries.begin(), entries.end());
  ModeOperator annihilate(cutoff, a);
  ModeOperator create = annihilate.adjoint();
  ModeOperator number = create * annihilate;
  return {std::move(annihilate), std::move(create), std::move(number)};
}

TwoModeOperator tensor(const ModeOperator& op_a, const ModeOperator& op_b) {
  require_same_cutoff(op_a.cutoff(), op_b.cutoff(), "tensor");
  const int d = op_a.dim();
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(std::size_t(op_a.matrix().nonZeros()) * std::size_t(op_b.matrix().nonZeros()));
  for (int ka = 0; ka < op_a.matrix().outerSize(); ++ka) {
    for (SparseMatrix::InnerIterator ia(op_a.matrix(), ka); ia; ++ia) {
      for (int kb = 0; kb < op_b.matrix().outerSize(); ++kb) {
        for (SparseMatrix::InnerIterator ib(op_b.matrix(), kb); ib; ++ib) {
          entries.emplace_back(int(ia.row()) * d + int(ib.row()), int(ia.col()) * d + int(ib.col()),
                               ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix m(d * d, d * d);
  m.setFromTriplets(entries.begin(), entries.end());
  return {op_a.cutoff(), std::move(m)};
}

double hermiticity_defect(const SparseMatrix& h) {
  const double norm = h.norm();
  if (norm == 0.0) return 0.0;
  return SparseMatrix(h - SparseMatrix(h.adjoint())).norm() / norm;
}

// ---------------------------------------------------------------------------

PureState::PureState(FockCutoff cutoff, Vector amplitudes)
    : cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != cutoff_.two_mode_dim()) {
    throw std::invalid_argument("PureState: amplitude vector has size " +
                                std::to_string(amplitudes_.size()) + ", expected " +
                                std::to_string(cutoff_.two_mode_dim()));
  }
  const double norm = amplitudes_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("PureState: zero or non-finite amplitude vector");
  }
  amplitudes_ /= norm;
}

PureState PureState::fock(FockCutoff cutoff, int n_a, int n_b) {
  if (n_a < 0 || n_b < 0 || n_a > cutoff.n_max() || n_b > cutoff.n_max()) {
    throw std::out_of_range("PureState::fock: occupation outside the truncated basis");
  }
  Vector v = Vector::Zero(cutoff.two_mode_dim());
  v[n_a * cutoff.mode_dim() + n_b] = 1.0;
  return {cutoff, std::move(v)};
}

PureState PureState::product(FockCutoff cutoff, const Vector& mode_a, const Vector& mode_b) {
  const int d = cutoff.mode_dim();
  if (mode_a.size() != d || mode_b.size() != d) {
    throw std::invalid_argument("PureState::product: single-mode vectors must have size n_max+1");
  }
  Vector v(d * d);
  for (int i = 0; i < d; ++i) v.segment(i * d, d) = mode_a[i] * mode_b;
  return {cutoff, std::move(v)};
}

Eigen::MatrixXcd PureState::coefficient_matrix() const {
  const int d = cutoff_.mode_dim();
  return Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      amplitudes_.data(), d, d);
}

cplx PureState::expectation(const TwoModeOperator& op) const {
  require_same_cutoff(cutoff_, op.cutoff(), "PureState::expectation");
  return amplitudes_.dot(op.matrix() * amplitudes_);
}

cplx PureState::overlap(const PureState& other) const {
  require_same_cutoff(cutoff_, other.cutoff_, "PureState::overlap");
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: expected a non-empty square matrix");
  }
  const double scale = std::max(1.0, entries_.norm());
  if ((entries_ - entries_.adjoint()).norm() > 1e-10 * scale) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > 1e-8) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(trace() - 1.0));
  }
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Vector coherent_amplitudes(cplx amplitude, int n_max) {
  Vector c(n_max + 1);
  const double prefactor = std::exp(-0.5 * std::norm(amplitude));
  c[0] = prefactor;
  for (int n = 1; n <= n_max; ++n) c[n] = c[n - 1] * amplitude / std::sqrt(double(n));
  return c;
}

TruncatedState coherent_state(cplx amplitude_a, cplx amplitude_b, FockCutoff cutoff) {
  const double limit = cutoff.n_max() / 4.0;
  for (cplx z : {amplitude_a, amplitude_b}) {
    if (std::norm(z) > limit) {
      throw std::invalid_argument("coherent_state: |amplitude|^2 = " + std::to_string(std::norm(z)) +
                                  " exceeds n_max/4 = " + std::to_string(limit));
    }
  }
  const Vector ca = coherent_amplitudes(amplitude_a, cutoff.n_max());
  const Vector cb = coherent_amplitudes(amplitude_b, cutoff.n_max());
  const double kept = ca.squaredNorm() * cb.squaredNorm();
  return {PureState::product(cutoff, ca, cb), std::max(0.0, 1.0 - kept)};
}

DensityMatrix partial_trace(const PureState& state, Mode keep) {
  const Eigen::MatrixXcd c = state.coefficient_matrix();
  Eigen::MatrixXcd rho(c.rows(), c.rows());
  if (keep == Mode::A) {
    rho.noalias() = c * c.adjoint();
  } else {
    rho.noalias() = c.transpose() * c.conjugate();
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

double shannon_entropy(const Eigen::VectorXd& probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p < 1e-14) continue;
    s -= p * std::log(p);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd p = rho.eigenvalues();
  if (p.minCoeff() < -1e-12 * std::max(1, rho.dim())) {
    throw std::invalid_argument("von_neumann_entropy: density matrix is not positive semidefinite");
  }
  return shannon_entropy(p);
}

double schmidt_entropy(const PureState& state) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(state.coefficient_matrix());
  return shannon_entropy(svd.singularValues().array().square().matrix());
}

double entanglement_entropy(const PureState& state) {
  const Eigen::MatrixXcd c = state.coefficient_matrix();
  const auto keep = [](const Eigen::VectorXd& weights) {
    double tail = 0.0;
    Eigen::Index k = weights.size();
    while (k > 1 && tail + weights[k - 1] < 1e-16) tail += weights[--k];
    return k;
  };
  const Eigen::Index rows = keep(c.rowwise().squaredNorm());
  const Eigen::Index cols = keep(c.colwise().squaredNorm().transpose());
  const Eigen::MatrixXcd sub = c.topLeftCorner(rows, cols);
  Eigen::MatrixXcd rho = sub * sub.adjoint();
  rho /= rho.trace().real();
  return von_neumann_entropy(DensityMatrix(std::move(rho)));
}

}  // namespace twomode
