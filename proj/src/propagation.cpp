#include <cmath>
#include <mutex>

#include "twomode/fock.hpp"

namespace twomode {

namespace {

struct KrylovBasis {
  Eigen::MatrixXcd v;
  Eigen::MatrixXd t;
  double next_beta = 0.0;
  int size = 0;
};

KrylovBasis lanczos_basis(const SparseMatrix& h, const Vector& start, int max_dim) {
  const int dim = static_cast<int>(h.rows());
  max_dim = std::min(max_dim, dim);
  KrylovBasis kb;
  kb.v.resize(dim, max_dim);
  kb.t = Eigen::MatrixXd::Zero(max_dim, max_dim);
  kb.v.col(0) = start;
  for (int j = 0; j < max_dim; ++j) {
    Vector w = h * kb.v.col(j);
    kb.t(j, j) = kb.v.col(j).dot(w).real();
    for (int pass = 0; pass < 2; ++pass) {
      const Vector coeff = kb.v.leftCols(j + 1).adjoint() * w;
      w.noalias() -= kb.v.leftCols(j + 1) * coeff;
    }
    const double beta = w.norm();
    kb.size = j + 1;
    kb.next_beta = beta;
    if (beta < 1e-14 * std::max(1.0, std::abs(kb.t(j, j)))) {
      kb.next_beta = 0.0;
      break;
    }
    if (j + 1 == max_dim) break;
    kb.t(j, j + 1) = kb.t(j + 1, j) = beta;
    kb.v.col(j + 1) = w / beta;
  }
  return kb;
}

}  // namespace

Vector krylov_expm_apply(const SparseMatrix& h, const Vector& v, double t, int krylov_dim,
                         double tolerance) {
  Vector state = v;
  const double total = std::abs(t);
  const double sign = t < 0 ? -1.0 : 1.0;
  double done = 0.0;
  double step = total;
  int guard = 0;
  while (done < total) {
    if (++guard > 1000000) throw ConvergenceError("krylov_expm_apply: step size collapsed");
    const double beta0 = state.norm();
    if (beta0 == 0.0) return state;
    const KrylovBasis kb = lanczos_basis(h, state / beta0, krylov_dim);
    const int k = kb.size;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(kb.t.topLeftCorner(k, k));
    step = std::min(step, total - done);
    for (;;) {
      const Eigen::VectorXcd phases =
          (small.eigenvalues().cast<cplx>() * cplx(0.0, -sign * step)).array().exp();
      const Eigen::VectorXcd y =
          small.eigenvectors().cast<cplx>() *
          (phases.array() * small.eigenvectors().row(0).transpose().cast<cplx>().array()).matrix();
      const double error = beta0 * kb.next_beta * std::abs(y[k - 1]);
      if (kb.next_beta == 0.0 || error <= tolerance * std::max(step / total, 1e-3)) {
        state = beta0 * (kb.v.leftCols(k) * y);
        done += step;
        step *= 1.25;
        break;
      }
      step *= 0.5;
      if (step < 1e-300) throw ConvergenceError("krylov_expm_apply: step size collapsed");
    }
  }
  return state;
}

Propagator::Propagator(SparseMatrix h, PropagationOptions options)
    : h_(std::move(h)), options_(options) {
  const double defect = hermiticity_defect(h_);
  if (defect > 1e-12) {
    throw std::invalid_argument("Propagator: Hamiltonian is not Hermitian (relative defect " +
                                std::to_string(defect) + ")");
  }
  for (auto& indices : connected_blocks(h_)) {
    Block b;
    b.indices = std::move(indices);
    blocks_.push_back(std::move(b));
  }
}

namespace {
std::mutex& propagator_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Vector Propagator::apply(const Vector& psi, double t) const {
  if (psi.size() != h_.rows()) throw std::invalid_argument("Propagator::apply: size mismatch");
  Vector out = Vector::Zero(psi.size());
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const auto& indices = blocks_[bi].indices;
    const int n = static_cast<int>(indices.size());
    Vector local(n);
    bool support = false;
    for (int i = 0; i < n; ++i) {
      local[i] = psi[indices[i]];
      support = support || local[i] != cplx(0.0);
    }
    if (!support) continue;

    // Blocks are decomposed on first use; only blocks carrying amplitude pay.
    Block* block = &blocks_[bi];
    {
      std::lock_guard<std::mutex> lock(propagator_mutex());
      if (!block->dense && block->sub.rows() == 0) {
        std::vector<int> local_index(h_.rows(), -1);
        for (int i = 0; i < n; ++i) local_index[indices[i]] = i;
        std::vector<Eigen::Triplet<cplx>> entries;
        for (int j = 0; j < n; ++j) {
          for (SparseMatrix::InnerIterator it(h_, indices[j]); it; ++it) {
            const int i = local_index[it.row()];
            if (i >= 0) entries.emplace_back(i, j, it.value());
          }
        }
        block->sub.resize(n, n);
        block->sub.setFromTriplets(entries.begin(), entries.end());
        if (n <= options_.dense_limit) {
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver{Eigen::MatrixXcd(block->sub)};
          if (solver.info() != Eigen::Success) throw ConvergenceError("Propagator: eigensolver failed");
          block->eigenvalues = solver.eigenvalues();
          block->eigenvectors = solver.eigenvectors();
          block->dense = true;
        }
      }
    }

    Vector evolved;
    if (block->dense) {
      const Vector coeff = block->eigenvectors.adjoint() * local;
      const Vector phases = (block->eigenvalues.cast<cplx>() * cplx(0.0, -t)).array().exp();
      evolved = block->eigenvectors * (phases.array() * coeff.array()).matrix();
    } else {
      evolved = krylov_expm_apply(block->sub, local, t, options_.krylov_dim, options_.tolerance);
    }
    for (int i = 0; i < n; ++i) out[indices[i]] = evolved[i];
  }
  return out;
}

PureState propagate(const TwoModeOperator& h, const PureState& psi0, double t,
                    const PropagationOptions& options) {
  if (!(h.cutoff() == psi0.cutoff())) throw std::invalid_argument("propagate: cutoff mismatch");
  if (!std::isfinite(t)) throw std::invalid_argument("propagate: time must be finite");
  if (t == 0.0) return psi0;
  const Propagator propagator(h.matrix(), options);
  return PureState(psi0.cutoff(), propagator.apply(psi0.amplitudes(), t));
}

}  // namespace twomode
