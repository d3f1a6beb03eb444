#include <cmath>

#include <gtest/gtest.h>

#include "twomode/model.hpp"

using namespace twomode;

namespace {

double matrix_element(const TwoModeOperator& h, const PureState& bra, const PureState& ket) {
  return std::real(bra.amplitudes().dot(h.matrix() * ket.amplitudes()));
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW((ModelParams{1.0, 0.5, 0.01, 0.0, 0.0}.validate()));
  EXPECT_THROW((ModelParams{1.0, 0.5, 0.0, 0.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{0.0, 0.5, 0.01, 0.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{1.0, -1.0, 0.01, 0.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{1.0, 0.5, 0.01, -0.1, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{1.0, NAN, 0.01, 0.0, 0.0}.validate()), std::invalid_argument);
}

TEST(Cutoff, DefaultPolicy) {
  EXPECT_EQ(default_cutoff(ModelParams{1.0, 0.5, 0.01, 0, 0}).n_max(), 30);
  EXPECT_EQ(default_cutoff(ModelParams{1.0, 1.5, 0.01, 0, 0}).n_max(), 45);
  EXPECT_EQ(default_cutoff(ModelParams{1.0, 0.5, 0.01, 0, 0}, 4.0).n_max(), 64);
}

TEST(Hamiltonian, AbElements) {
  const FockCutoff c(4);
  const ModelParams p{1.0, 0.3, 0.01, 0.0, 0.0};
  const TwoModeOperator h = build_hamiltonian_ab(p, c);
  EXPECT_NEAR(matrix_element(h, PureState::fock(c, 1, 0), PureState::fock(c, 0, 1)), -0.3, 1e-15);
  EXPECT_NEAR(matrix_element(h, PureState::fock(c, 2, 1), PureState::fock(c, 2, 1)), 3.0 + 0.09, 1e-14);
  EXPECT_LT(hermiticity_defect(h.matrix()), 1e-12);

  const TwoModeOperator diag = build_hamiltonian_ab(ModelParams{1.0, 0.0, 0.01, 0, 0}, c);
  for (int k = 0; k < diag.matrix().outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diag.matrix(), k); it; ++it) {
      if (it.value() != cplx(0.0)) EXPECT_EQ(it.row(), it.col());
    }
  }
}

TEST(Hamiltonian, AlphaBetaDiagonal) {
  const FockCutoff c(6);
  const ModelParams p{1.0, 1.04, 0.01, 0.0, 0.0};
  const TwoModeOperator h = build_hamiltonian_alphabeta(p, c);
  for (int n = 0; n <= 6; ++n) {
    EXPECT_NEAR(matrix_element(h, PureState::fock(c, n, 0), PureState::fock(c, n, 0)), (1.0 - 1.04) * n + 0.01 * n * n,
                1e-14);
  }
  for (int k = 0; k < h.matrix().outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h.matrix(), k); it; ++it) EXPECT_EQ(it.row(), it.col());
  }
}

TEST(Hamiltonian, SbfCoupling) {
  const FockCutoff c(5);
  ModelParams p{1.0, 0.5, 0.01, 0.0, 0.0};
  EXPECT_EQ((build_sbf_hamiltonian(p, c).matrix() - build_hamiltonian_alphabeta(p, c).matrix()).norm(), 0.0);
  p.lambda = 0.07;
  const TwoModeOperator h = build_sbf_hamiltonian(p, c);
  EXPECT_NEAR(matrix_element(h, PureState::fock(c, 1, 0), PureState::fock(c, 0, 0)), -0.07, 1e-15);
  EXPECT_LT(hermiticity_defect(h.matrix()), 1e-12);
  // Only n_alpha -> n_alpha +- 1 at fixed n_beta.
  for (int k = 0; k < h.matrix().outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h.matrix(), k); it; ++it) {
      const int na_r = int(it.row()) / 6, nb_r = int(it.row()) % 6, na_c = int(it.col()) / 6, nb_c = int(it.col()) % 6;
      EXPECT_EQ(nb_r, nb_c);
      EXPECT_LE(std::abs(na_r - na_c), 1);
    }
  }
}

TEST(Hamiltonian, UnitaryEquivalenceOfBuilders) {
  const ModelParams p{1.0, 1.1, 0.02, 0.0, 0.0};
  const FockCutoff c(30);
  const auto ab = lowest_eigenpairs(build_hamiltonian_ab(p, c).matrix(), 10);
  const auto alphabeta = lowest_eigenpairs(build_hamiltonian_alphabeta(p, c).matrix(), 10);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(ab[i].value, alphabeta[i].value, 1e-9);
}

TEST(Rotation, SmallExamples) {
  const FockCutoff c(3);
  const PureState vac = rotate_modes(PureState::fock(c, 0, 0), RotationDirection::AlphaBetaToAB);
  EXPECT_NEAR(std::abs(vac.amplitude(0, 0)), 1.0, 1e-15);

  const PureState one = rotate_modes(PureState::fock(c, 1, 0), RotationDirection::AlphaBetaToAB);
  EXPECT_NEAR(one.amplitude(1, 0).real(), M_SQRT1_2, 1e-15);
  EXPECT_NEAR(one.amplitude(0, 1).real(), M_SQRT1_2, 1e-15);

  const PureState two = rotate_modes(PureState::fock(c, 2, 0), RotationDirection::AlphaBetaToAB);
  for (int k = 0; k <= 2; ++k) {
    const double binom = factorial(2) / (factorial(k) * factorial(2 - k));
    EXPECT_NEAR(two.amplitude(k, 2 - k).real(), std::sqrt(binom) / 2.0, 1e-15);
  }
}

// Independent oracle: apply (alpha^dag)^n1 (beta^dag)^n2 / sqrt(n1! n2!) to the
// (a,b) vacuum with alpha^dag = (a^dag + b^dag)/sqrt2, beta^dag = (a^dag - b^dag)/sqrt2.
TEST(Rotation, MatchesLadderConstruction) {
  const int n_max = 9;
  const FockCutoff c(n_max);
  const auto l = ladder_operators(c);
  const auto one = ModeOperator::identity(c);
  const SparseMatrix ad = tensor(l.create, one).matrix();
  const SparseMatrix bd = tensor(one, l.create).matrix();
  const SparseMatrix alpha_d = (ad + bd) * M_SQRT1_2;
  const SparseMatrix beta_d = (ad - bd) * M_SQRT1_2;
  for (int n1 = 0; n1 <= n_max; ++n1) {
    for (int n2 = 0; n1 + n2 <= n_max; ++n2) {
      Vector v = PureState::fock(c, 0, 0).amplitudes();
      for (int k = 0; k < n1; ++k) v = alpha_d * v;
      for (int k = 0; k < n2; ++k) v = beta_d * v;
      v /= std::sqrt(factorial(n1) * factorial(n2));
      const PureState rotated = rotate_modes(PureState::fock(c, n1, n2), RotationDirection::AlphaBetaToAB);
      EXPECT_LT((rotated.amplitudes() - v).norm(), 1e-10) << n1 << "," << n2;
    }
  }
}

TEST(Rotation, InvolutionAndUnitary) {
  const FockCutoff c(8);
  Vector v(c.two_mode_dim());
  for (int i = 0; i < v.size(); ++i) v[i] = cplx(std::sin(1.3 * i), std::cos(0.7 * i * i));
  // Keep total occupation within the cutoff.
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      if (a + b > 8) v[a * 9 + b] = 0.0;
  const PureState psi(c, v);
  const PureState once = rotate_modes(psi, RotationDirection::AlphaBetaToAB);
  const PureState twice = rotate_modes(once, RotationDirection::ABToAlphaBeta);
  EXPECT_NEAR(once.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_LT((twice.amplitudes() - psi.amplitudes()).norm(), 1e-10);
}

TEST(Rotation, OverflowingOutputCutoffThrows) {
  const FockCutoff c(4);
  EXPECT_THROW(rotate_modes(PureState::fock(c, 4, 0), RotationDirection::AlphaBetaToAB, FockCutoff(2)),
               std::domain_error);
  const PureState grown = rotate_modes(PureState::fock(c, 4, 0), RotationDirection::AlphaBetaToAB, FockCutoff(6));
  EXPECT_EQ(grown.cutoff().n_max(), 6);
}

TEST(Phase, Classification) {
  const auto normal = classify_phase(ModelParams{1.0, 0.5, 0.01, 0, 0});
  EXPECT_EQ(normal.phase, Phase::Normal);
  EXPECT_EQ(normal.ground_energy, 0.0);

  const auto cond = classify_phase(ModelParams{1.0, 1.04, 0.01, 0, 0});
  EXPECT_EQ(cond.phase, Phase::Condensate);
  EXPECT_EQ(cond.n_alpha, 2);
  EXPECT_NEAR(cond.ground_energy, -0.04, 1e-15);

  const auto boundary = classify_phase(ModelParams{1.0, 1.05, 0.01, 0, 0});
  EXPECT_EQ(boundary.phase, Phase::DegenerateBoundary);
  EXPECT_EQ(boundary.n_alpha, 2);
  EXPECT_EQ(boundary.n_alpha_upper, 3);

  const auto near = classify_phase(ModelParams{1.0, 1.0506, 0.01, 0, 0});
  EXPECT_EQ(near.phase, Phase::Condensate);
  EXPECT_EQ(near.n_alpha, 3);
}

TEST(Phase, EdGroundEnergy) {
  const ModelParams p{1.0, 1.04, 0.01, 0, 0};
  const GroundState gs = ground_state(build_hamiltonian_alphabeta(p, FockCutoff(25)));
  EXPECT_NEAR(gs.energy, -0.04, 1e-12);
  EXPECT_NEAR(std::norm(gs.state.amplitude(2, 0)), 1.0, 1e-12);

  const GroundState vac = ground_state(build_hamiltonian_alphabeta(ModelParams{1.0, 0.5, 0.01, 0, 0}, FockCutoff(10)));
  EXPECT_NEAR(vac.energy, 0.0, 1e-14);
  EXPECT_NEAR(std::norm(vac.state.amplitude(0, 0)), 1.0, 1e-14);
}

TEST(CondensateEntropy, Values) {
  EXPECT_EQ(fock_condensate_entropy(0), 0.0);
  EXPECT_NEAR(fock_condensate_entropy(1), std::log(2.0), 1e-15);
  EXPECT_NEAR(fock_condensate_entropy(2), 1.0397207708399179, 1e-14);
  // Large n: log-gamma path against the Gaussian limit 0.5 ln(pi e n / 2).
  const double n = 400;
  EXPECT_NEAR(fock_condensate_entropy(400), 0.5 * std::log(M_PI * M_E * n / 2.0), 2e-3);
  EXPECT_THROW(fock_condensate_entropy(-1), std::invalid_argument);
}

TEST(CondensateEntropy, MatchesRotatedPartialTrace) {
  for (int n = 0; n <= 12; ++n) {
    const FockCutoff c(12);
    const PureState ab = rotate_modes(PureState::fock(c, n, 0), RotationDirection::AlphaBetaToAB);
    const DensityMatrix rho = partial_trace(ab, Mode::A);
    EXPECT_NEAR(fock_condensate_entropy(n), von_neumann_entropy(rho), 1e-10) << n;
    // Reduced state is diagonal with binomial weights.
    for (int k = 0; k <= n; ++k) {
      EXPECT_NEAR(rho.entries()(k, k).real(), factorial(n) / (factorial(k) * factorial(n - k)) / std::pow(2.0, n),
                  1e-12);
    }
    if (n > 0) EXPECT_GT(fock_condensate_entropy(n), fock_condensate_entropy(n - 1));
  }
}

TEST(Perturbation, Examples) {
  const auto normal = perturbative_energy_shift(ModelParams{1.0, 0.5, 0.01, 0.01, 0});
  EXPECT_EQ(normal.branch, PerturbationBranch::NormalSecondOrder);
  EXPECT_NEAR(normal.delta_e, -1.9607843137254903e-4, 1e-18);
  EXPECT_FALSE(normal.valid);  // lambda = g is not below g

  const auto cond = perturbative_energy_shift(ModelParams{1.0, 1.04, 0.01, 1e-4, 0});
  EXPECT_EQ(cond.branch, PerturbationBranch::CondensateSecondOrder);
  EXPECT_NEAR(cond.delta_e, -5e-6, 1e-18);
  EXPECT_TRUE(cond.valid);

  const auto boundary = perturbative_energy_shift(ModelParams{1.0, 1.05, 0.01, 1e-4, 0});
  EXPECT_EQ(boundary.branch, PerturbationBranch::DegenerateFirstOrder);
  EXPECT_NEAR(boundary.delta_e, -1e-4 * std::sqrt(3.0), 1e-18);
}

TEST(Perturbation, IntegerCaseReducesToClosedForm) {
  for (int n = 1; n <= 20; ++n) {
    const double g = 0.01, lambda = 1e-5;
    const ModelParams p{1.0, 1.0 + 2.0 * g * n, g, lambda, 0};
    EXPECT_NEAR(perturbative_energy_shift(p).delta_e, -lambda * lambda * (2 * n + 1) / g, 1e-12 * lambda * lambda / g);
  }
}

TEST(Perturbation, NonIntegerAgainstEd) {
  const ModelParams base{1.0, 1.047, 0.01, 0.0, 0};  // ratio 2.35
  const FockCutoff c = default_cutoff(base);
  const double e0 = ground_state(build_sbf_hamiltonian(base, c)).energy;
  ModelParams p = base;
  p.lambda = 3e-5;  // the n=2 -> 3 gap is only 0.003
  const double e = ground_state(build_sbf_hamiltonian(p, c)).energy;
  const double de = perturbative_energy_shift(p).delta_e;
  EXPECT_LT(std::abs(e - e0 - de), 1e-3 * std::abs(de));
}
