#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "twomode/fock.hpp"

namespace twomode {

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

Eigen::MatrixXcd dense_block(const SparseMatrix& h, const std::vector<int>& indices) {
  const int n = static_cast<int>(indices.size());
  std::vector<int> local(h.rows(), -1);
  for (int i = 0; i < n; ++i) local[indices[i]] = i;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (SparseMatrix::InnerIterator it(h, indices[j]); it; ++it) {
      const int i = local[it.row()];
      if (i >= 0) m(i, j) = it.value();
    }
  }
  return m;
}

SparseMatrix sparse_block(const SparseMatrix& h, const std::vector<int>& indices) {
  const int n = static_cast<int>(indices.size());
  std::vector<int> local(h.rows(), -1);
  for (int i = 0; i < n; ++i) local[indices[i]] = i;
  std::vector<Eigen::Triplet<cplx>> entries;
  for (int j = 0; j < n; ++j) {
    for (SparseMatrix::InnerIterator it(h, indices[j]); it; ++it) {
      const int i = local[it.row()];
      if (i >= 0) entries.emplace_back(i, j, it.value());
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

double rayleigh_quotient(const SparseMatrix& h, const Vector& v) {
  return v.dot(h * v).real() / v.squaredNorm();
}

}  // namespace

std::vector<std::vector<int>> connected_blocks(const SparseMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("connected_blocks: matrix must be square");
  const int n = static_cast<int>(h.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int k = 0; k < h.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      const int ra = find_root(parent, int(it.row()));
      const int rb = find_root(parent, int(it.col()));
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::vector<int> slot(n, -1);
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) {
    const int r = find_root(parent, i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].push_back(i);
  }
  return blocks;
}

std::vector<Eigenpair> lanczos_lowest(const SparseMatrix& h, int count, const EigenOptions& options) {
  const int dim = static_cast<int>(h.rows());
  if (count <= 0 || dim == 0) return {};
  count = std::min(count, dim);
  const int max_basis = std::min(dim, std::max(options.lanczos_max_basis, count + 20));

  Vector start(dim);
  for (int i = 0; i < dim; ++i) start[i] = 1.0 + 0.25 * std::cos(0.7 * i + 0.3);
  start.normalize();

  std::vector<Eigenpair> result;
  for (int restart = 0; restart <= options.lanczos_max_restarts; ++restart) {
    Eigen::MatrixXcd basis(dim, max_basis);
    std::vector<double> alpha, beta;
    basis.col(0) = start;
    int m = 0;
    double last_beta = 0.0;
    for (int j = 0; j < max_basis; ++j) {
      Vector w = h * basis.col(j);
      const double a = basis.col(j).dot(w).real();
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Vector coeff = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * coeff;
      }
      m = j + 1;
      last_beta = w.norm();
      if (j + 1 == max_basis || last_beta < 1e-13 * std::max(1.0, std::abs(a))) break;
      beta.push_back(last_beta);
      basis.col(j + 1) = w / last_beta;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);

    const int wanted = std::min(count, m);
    result.clear();
    bool converged = true;
    Vector next = Vector::Zero(dim);
    for (int i = 0; i < wanted; ++i) {
      Vector v = basis.leftCols(m) * small.eigenvectors().col(i).cast<cplx>();
      v.normalize();
      const double value = rayleigh_quotient(h, v);
      const double residual = (h * v - value * v).norm();
      if (residual > options.residual_tol * std::max(1.0, std::abs(value))) converged = false;
      next += v;
      result.push_back({value, std::move(v)});
    }
    if (converged || m == dim) {
      if (wanted < count) throw ConvergenceError("lanczos_lowest: Krylov space exhausted early");
      return result;
    }
    start = next.normalized();
  }
  throw ConvergenceError("lanczos_lowest: residual tolerance not reached after restarts");
}

std::vector<Eigenpair> lowest_eigenpairs(const SparseMatrix& h, int count, const EigenOptions& options) {
  if (h.rows() != h.cols()) throw std::invalid_argument("lowest_eigenpairs: matrix must be square");
  const double defect = hermiticity_defect(h);
  if (defect > 1e-12) {
    throw std::invalid_argument("lowest_eigenpairs: matrix is not Hermitian (relative defect " +
                                std::to_string(defect) + ")");
  }
  const int dim = static_cast<int>(h.rows());
  count = std::min(count, dim);

  std::vector<Eigenpair> all;
  for (const auto& block : connected_blocks(h)) {
    const int n = static_cast<int>(block.size());
    const int take = std::min(count, n);
    std::vector<Eigenpair> local;
    if (n <= options.dense_limit) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_block(h, block));
      if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
      for (int i = 0; i < take; ++i) {
        local.push_back({solver.eigenvalues()[i], solver.eigenvectors().col(i)});
      }
    } else {
      const SparseMatrix sub = sparse_block(h, block);
      local = lanczos_lowest(sub, take, options);
    }
    for (auto& pair : local) {
      Vector full = Vector::Zero(dim);
      for (int i = 0; i < n; ++i) full[block[i]] = pair.vector[i];
      all.push_back({rayleigh_quotient(h, full), std::move(full)});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Eigenpair& x, const Eigenpair& y) { return x.value < y.value; });
  if (static_cast<int>(all.size()) > count) all.resize(count);
  return all;
}

GroundState ground_state(const TwoModeOperator& h, const EigenOptions& options) {
  const int dim = h.dim();
  int count = std::min(dim, 8);
  for (;;) {
    const auto pairs = lowest_eigenpairs(h.matrix(), count, options);
    const double e0 = pairs.front().value;
    const double window = options.degeneracy_tol * std::max(1.0, std::abs(e0));
    std::size_t k = 1;
    while (k < pairs.size() && pairs[k].value - e0 <= window) ++k;
    if (k == pairs.size() && count < dim) {
      count = std::min(dim, 2 * count);
      continue;
    }
    std::vector<PureState> multiplet;
    for (std::size_t i = 0; i < k; ++i) multiplet.emplace_back(h.cutoff(), pairs[i].vector);
    const double gap = k < pairs.size() ? pairs[k].value - e0 : std::numeric_limits<double>::infinity();
    PureState first = multiplet.front();
    return {e0, std::move(first), std::move(multiplet), gap};
  }
}

}  // namespace twomode
