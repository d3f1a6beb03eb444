#include "twomode/model.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace twomode {

void ModelParams::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!(finite(omega) && finite(w) && finite(g) && finite(lambda) && finite(nu_prime))) {
    throw std::invalid_argument("ModelParams: all parameters must be finite");
  }
  if (!(omega > 0.0)) throw std::invalid_argument("ModelParams: omega must be > 0");
  if (w < 0.0) throw std::invalid_argument("ModelParams: w must be >= 0");
  if (!(g > 0.0)) {
    throw std::invalid_argument("ModelParams: g must be > 0 (the anomalous Hamiltonian is unbounded at g = 0)");
  }
  if (lambda < 0.0) throw std::invalid_argument("ModelParams: lambda must be >= 0");
  if (nu_prime < 0.0) throw std::invalid_argument("ModelParams: nu_prime must be >= 0");
}

FockCutoff default_cutoff(const ModelParams& params, double nu) {
  const int from_nu = 4 * static_cast<int>(std::ceil(nu * nu));
  const int from_ratio = static_cast<int>(std::ceil((params.w - params.omega) / (2.0 * params.g))) + 20;
  return FockCutoff(std::max({from_nu, from_ratio, 30}));
}

namespace {

struct TwoModeLadders {
  TwoModeOperator first_a, second_a, first_n, second_n, id;
};

TwoModeLadders two_mode_ladders(FockCutoff cutoff) {
  const auto l = ladder_operators(cutoff);
  const auto one = ModeOperator::identity(cutoff);
  return {tensor(l.annihilate, one), tensor(one, l.annihilate), tensor(l.number, one),
          tensor(one, l.number), TwoModeOperator::identity(cutoff)};
}

}  // namespace

TwoModeOperator build_hamiltonian_ab(const ModelParams& params, FockCutoff cutoff) {
  params.validate();
  const auto op = two_mode_ladders(cutoff);
  const TwoModeOperator total = op.first_n + op.second_n;
  const TwoModeOperator hop = op.first_a.adjoint() * op.second_a + op.second_a.adjoint() * op.first_a;
  return cplx(params.omega) * total - cplx(params.w) * hop + cplx(params.g) * (total * total);
}

TwoModeOperator build_hamiltonian_alphabeta(const ModelParams& params, FockCutoff cutoff) {
  params.validate();
  const auto op = two_mode_ladders(cutoff);
  const TwoModeOperator total = op.first_n + op.second_n;
  return cplx(params.omega - params.w) * op.first_n + cplx(params.omega + params.w) * op.second_n +
         cplx(params.g) * (total * total);
}

TwoModeOperator build_sbf_hamiltonian(const ModelParams& params, FockCutoff cutoff) {
  const TwoModeOperator h0 = build_hamiltonian_alphabeta(params, cutoff);
  if (params.lambda == 0.0) return h0;
  const auto op = two_mode_ladders(cutoff);
  return h0 - cplx(params.lambda) * (op.first_a + op.first_a.adjoint());
}

// ---------------------------------------------------------------------------
// Mode rotation.
//
// Within the block of total occupation N the rotation is the matrix U_N with
// columns col(n1, N-n1) = (alpha^dag)^n1 (beta^dag)^(N-n1) |0> / norm,
// expanded over |k, N-k>. Columns with either occupation zero are binomial in
// closed form; the remaining ones come from U_N = R(-pi/4) P_b, with R the
// rotation generated by K = a^dag b - b^dag a and P_b = (-1)^{n_b}. The
// generator is diagonalized through its similarity to the real symmetric
// tridiagonal matrix S with off-diagonal sqrt((k+1)(N-k)).

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Eigen::MatrixXd rotation_block_uncached(int n_total) {
  const int d = n_total + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sub(std::max(d - 1, 0));
  for (int k = 0; k + 1 < d; ++k) sub[k] = std::sqrt(double(k + 1) * double(n_total - k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub);
  const double angle = -M_PI / 4.0;
  // exp(angle K) = D exp(-i angle S) D^-1, D = diag(i^k).
  const Eigen::MatrixXcd v = solver.eigenvectors().cast<cplx>();
  const Eigen::VectorXcd phases = (solver.eigenvalues().cast<cplx>() * cplx(0.0, -angle)).array().exp();
  const Eigen::MatrixXcd core = v * phases.asDiagonal() * v.transpose();
  Eigen::MatrixXd u(d, d);
  static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      // D_rr * core_rc * conj(D_cc), then P_b on the column: (-1)^{N-c}.
      const cplx value = ipow[r % 4] * core(r, c) * std::conj(ipow[c % 4]);
      u(r, c) = value.real() * (((n_total - c) % 2) ? -1.0 : 1.0);
    }
  }
  return u;
}

std::shared_ptr<const Eigen::MatrixXd> rotation_block(int n_total) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Eigen::MatrixXd>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n_total);
    if (it != cache.end()) return it->second;
  }
  auto block = std::make_shared<const Eigen::MatrixXd>(rotation_block_uncached(n_total));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(n_total, block).first->second;
}

// Column of U_N for (n1, N-n1) when one occupation is zero.
Eigen::VectorXd binomial_column(int n_total, bool second_empty) {
  Eigen::VectorXd col(n_total + 1);
  for (int k = 0; k <= n_total; ++k) {
    const double magnitude = std::exp(0.5 * (log_binomial(n_total, k) - n_total * std::log(2.0)));
    const bool negative = !second_empty && ((n_total - k) % 2 == 1);
    col[k] = negative ? -magnitude : magnitude;
  }
  return col;
}

}  // namespace

PureState rotate_modes(const PureState& state, RotationDirection /*direction*/,
                       std::optional<FockCutoff> out_cutoff) {
  const FockCutoff in = state.cutoff();
  const FockCutoff out = out_cutoff.value_or(in);
  const int n_in = in.n_max();
  const int n_out = out.n_max();
  Vector result = Vector::Zero(out.two_mode_dim());
  double dropped = 0.0;

  for (int n_total = 0; n_total <= 2 * n_in; ++n_total) {
    const int lo = std::max(0, n_total - n_in);
    const int hi = std::min(n_total, n_in);
    std::shared_ptr<const Eigen::MatrixXd> block;
    Eigen::VectorXd image = Eigen::VectorXd::Zero(n_total + 1);
    Eigen::VectorXcd image_c = Eigen::VectorXcd::Zero(n_total + 1);
    bool any = false;
    for (int n1 = lo; n1 <= hi; ++n1) {
      const cplx c = state.amplitude(n1, n_total - n1);
      if (c == cplx(0.0)) continue;
      any = true;
      if (n1 == n_total || n1 == 0) {
        image_c += c * binomial_column(n_total, n1 == n_total).cast<cplx>();
      } else {
        if (!block) block = rotation_block(n_total);
        image_c += c * block->col(n1).cast<cplx>();
      }
    }
    if (!any) continue;
    for (int k = 0; k <= n_total; ++k) {
      const int kb = n_total - k;
      if (k > n_out || kb > n_out) {
        dropped += std::norm(image_c[k]);
        continue;
      }
      result[k * out.mode_dim() + kb] = image_c[k];
    }
  }
  if (dropped > 1e-10) {
    throw std::domain_error("rotate_modes: " + std::to_string(dropped) +
                            " of the norm lies outside the output cutoff " + std::to_string(n_out));
  }
  return PureState(out, std::move(result));
}

// ---------------------------------------------------------------------------

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Normal: return "normal";
    case Phase::Condensate: return "condensate";
    case Phase::DegenerateBoundary: return "degenerate_boundary";
  }
  return "?";
}

const char* to_string(PerturbationBranch branch) {
  switch (branch) {
    case PerturbationBranch::NormalSecondOrder: return "normal_second_order";
    case PerturbationBranch::CondensateSecondOrder: return "condensate_second_order";
    case PerturbationBranch::DegenerateFirstOrder: return "degenerate_first_order";
  }
  return "?";
}

double alpha_sector_energy(const ModelParams& params, int n) {
  return (params.omega - params.w) * n + params.g * double(n) * double(n);
}

PhaseClassification classify_phase(const ModelParams& params) {
  params.validate();
  PhaseClassification out;
  out.occupation_ratio = (params.w - params.omega) / (2.0 * params.g);
  if (params.omega - params.w > 0.0) {
    out.phase = Phase::Normal;
    return out;
  }
  const double x = out.occupation_ratio;
  const double band = kTieTolerance * std::max(1.0, std::abs(x));
  const double lower = std::floor(x);
  if (std::abs(x - (lower + 0.5)) <= band) {
    out.phase = Phase::DegenerateBoundary;
    out.n_alpha = static_cast<int>(lower);
    out.n_alpha_upper = out.n_alpha + 1;
  } else {
    out.phase = Phase::Condensate;
    out.n_alpha = static_cast<int>(std::llround(x));
  }
  out.ground_energy = alpha_sector_energy(params, out.n_alpha);
  return out;
}

double fock_condensate_entropy(int n_alpha) {
  if (n_alpha < 0) throw std::invalid_argument("fock_condensate_entropy: n_alpha must be >= 0");
  const double n = n_alpha;
  double s = 0.0;
  for (int k = 0; k <= n_alpha; ++k) {
    const double log_p = log_binomial(n_alpha, k) - n * std::log(2.0);
    s -= std::exp(log_p) * log_p;
  }
  return s;
}

PerturbativeShift perturbative_energy_shift(const ModelParams& params) {
  const PhaseClassification phase = classify_phase(params);
  const double lambda = params.lambda;
  PerturbativeShift out{};
  out.valid = lambda < params.g;
  const auto energy = [&](int n) { return alpha_sector_energy(params, n); };
  switch (phase.phase) {
    case Phase::Normal:
      out.branch = PerturbationBranch::NormalSecondOrder;
      out.delta_e = -lambda * lambda / (params.omega - params.w + params.g);
      break;
    case Phase::Condensate: {
      // |<n+-1|alpha^dag + alpha|n>|^2 = n+1, n over the energy denominators.
      out.branch = PerturbationBranch::CondensateSecondOrder;
      const int n = phase.n_alpha;
      double sum = (n + 1) / (energy(n + 1) - energy(n));
      if (n > 0) sum += n / (energy(n - 1) - energy(n));
      out.delta_e = -lambda * lambda * sum;
      break;
    }
    case Phase::DegenerateBoundary:
      out.branch = PerturbationBranch::DegenerateFirstOrder;
      out.delta_e = -lambda * std::sqrt(double(phase.n_alpha + 1));
      break;
  }
  return out;
}

}  // namespace twomode
