#include <cmath>

#include <gtest/gtest.h>

#include "twomode/dynamics.hpp"

using namespace twomode;

namespace {

const ModelParams kDefaults{1.0, 2.0, 0.1, 0.11, 0.3};

}  // namespace

TEST(Coefficients, InitialAndHalfPeriod) {
  const DynamicsModel m(kDefaults);
  const EvolutionCoefficients c0 = m.coefficients(0.0);
  EXPECT_EQ(c0.f, cplx(1.0, 0.0));
  EXPECT_EQ(c0.f_prime, cplx(0.0, 0.0));
  EXPECT_NEAR(std::abs(c0.h), 0.0, 1e-15);
  const EvolutionCoefficients half = m.coefficients(m.period());
  EXPECT_NEAR(std::abs(half.f - cplx(-1.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(half.f_prime), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(half.h - cplx(2.0 * m.solution.nu, 0.0)), 0.0, 1e-12);
}

TEST(Coefficients, CanonicalOnDenseGrid) {
  const DynamicsModel m(kDefaults);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(m.coefficients(0.05 * i).canonical_residual()));
  EXPECT_LT(worst, 1e-12);
}

TEST(Coefficients, RequireGap) {
  BogoliubovParams b{};
  EXPECT_THROW(heisenberg_coefficients(b, 1.0, 0.1), std::domain_error);
}

TEST(Coefficients, ZeroThetaIsFreeRotation) {
  const BogoliubovParams b{0.0, 0.7, 0.0, 0.7, 0.0};
  const EvolutionCoefficients c = heisenberg_coefficients(b, 0.0, 1.3);
  EXPECT_NEAR(std::abs(c.f - std::exp(cplx(0.0, -0.7 * 1.3))), 0.0, 1e-15);
  EXPECT_EQ(c.f_prime, cplx(0.0, 0.0));
  const GaussianState s = covariance_from_coefficients(c, 0.4);
  EXPECT_NEAR(reduced_entropy(s.covariance), 0.0, 1e-12);
}

TEST(Gaussian, VacuumCovarianceAtStart) {
  ModelParams p = kDefaults;
  p.nu_prime = 0.0;
  const GaussianState s = DynamicsModel(p).state(0.0);
  EXPECT_LT((s.covariance - 0.5 * Eigen::Matrix4d::Identity()).norm(), 1e-15);
  EXPECT_LT(s.mean.norm(), 1e-15);
  EXPECT_NEAR(uncertainty_margin(s.covariance), 0.0, 1e-14);
}

TEST(Gaussian, InitialMeanIsCoherentAmplitude) {
  const GaussianState s = DynamicsModel(kDefaults).state(0.0);
  const double x = std::sqrt(2.0) * 0.3;
  EXPECT_NEAR(s.mean[0], x, 1e-15);
  EXPECT_NEAR(s.mean[1], 0.0, 1e-15);
  EXPECT_NEAR(s.mean[2], x, 1e-15);
  EXPECT_NEAR(s.mean[3], 0.0, 1e-15);
}

TEST(Gaussian, SymplecticEigenvaluesAndEntropy) {
  // Two-mode squeezed vacuum with r: both symplectic eigenvalues 1/2, reduced mu = cosh(2r)/2.
  const double r = 0.4;
  const double c = 0.5 * std::cosh(2 * r), s = 0.5 * std::sinh(2 * r);
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  v.diagonal().setConstant(c);
  v(0, 2) = v(2, 0) = s;
  v(1, 3) = v(3, 1) = -s;
  const Eigen::Vector2d nu = symplectic_eigenvalues(v);
  EXPECT_NEAR(nu[0], 0.5, 1e-13);
  EXPECT_NEAR(nu[1], 0.5, 1e-13);
  EXPECT_NEAR(reduced_entropy(v), gaussian_mode_entropy(c), 1e-14);
  const double sinh2 = std::sinh(r) * std::sinh(r);
  EXPECT_NEAR(gaussian_mode_entropy(c), (sinh2 + 1) * std::log(sinh2 + 1) - sinh2 * std::log(sinh2), 1e-13);
  EXPECT_EQ(gaussian_mode_entropy(0.5), 0.0);
}

TEST(Gaussian, PeriodicAndNuPrimeInvariant) {
  const DynamicsModel m(kDefaults);
  ModelParams other = kDefaults;
  other.nu_prime = 1.7;
  const DynamicsModel moved(other);
  for (double t : {0.3, 1.1, 4.0, 9.5}) {
    EXPECT_NEAR(m.entropy(t), m.entropy(t + m.period()), 1e-12);
    EXPECT_NEAR(m.entropy(t), moved.entropy(t), 1e-13);
    EXPECT_GE(uncertainty_margin(m.state(t).covariance), -1e-12);
    const Eigen::Vector2d nu = symplectic_eigenvalues(m.state(t).covariance);
    EXPECT_NEAR(nu[0], 0.5, 1e-10);
    EXPECT_NEAR(nu[1], 0.5, 1e-10);
  }
  EXPECT_NEAR(m.entropy(0.0), 0.0, 1e-13);
  EXPECT_NEAR(m.entropy(m.period()), 0.0, 1e-11);
}

TEST(Gaussian, RegressionValues) {
  const DynamicsModel m(kDefaults);
  const double eps = m.bogo.epsilon;
  EXPECT_NEAR(m.entropy(0.25 / eps), 0.392023896967, 1e-10);
  EXPECT_NEAR(m.entropy(1.0 / eps), 1.290870109581, 1e-10);
  EXPECT_NEAR(m.entropy(2.5 / eps), 0.992575371813, 1e-10);
}

TEST(Gaussian, NormalBranchRejected) {
  EXPECT_THROW(DynamicsModel(ModelParams{1.0, 0.5, 0.1, 0.11, 0.3}), std::domain_error);
  EXPECT_THROW(DynamicsModel(ModelParams{1.0, 2.0, 0.1, 0.0, 0.3}), std::domain_error);
}

TEST(Wavefunction, InitialCoherentState) {
  const DynamicsModel m(kDefaults);
  const EvolvedWavefunction psi = evolved_wavefunction(m.coefficients(0.0), 0.3);
  EXPECT_NEAR(std::abs(psi.quad_coef - cplx(0.5, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(psi.cross_coef), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(psi.linear_coef - cplx(std::sqrt(2.0) * 0.3, 0.0)), 0.0, 1e-15);
  EXPECT_FALSE(psi.near_singular);
  EXPECT_TRUE(psi.normalizable);
}

TEST(Wavefunction, MomentsMatchCovariance) {
  const DynamicsModel m(kDefaults);
  for (double t : {0.4, 2.0, 6.3}) {
    const GaussianState g = m.state(t);
    const GaussianState w = evolved_wavefunction(m.coefficients(t), 0.3).moments();
    EXPECT_LT((g.covariance - w.covariance).norm(), 1e-10) << t;
    EXPECT_LT((g.mean - w.mean).norm(), 1e-10) << t;
  }
}

TEST(Wavefunction, UnscaledLinearTermMovesTheMean) {
  const DynamicsModel m(kDefaults);
  const EvolutionCoefficients c = m.coefficients(2.0);
  const GaussianState unscaled = evolved_wavefunction(c, 0.3, WavefunctionConvention::UnscaledLinear).moments();
  EXPECT_GT((unscaled.mean - m.state(2.0).mean).norm(), 1e-3);
}

TEST(Sensitivity, SingleLambdaHasNoSpread) {
  std::vector<double> times;
  for (int i = 1; i <= 50; ++i) times.push_back(0.2 * i);
  const SensitivityReport r = short_time_sbf_sensitivity(kDefaults, {0.11}, times);
  EXPECT_EQ(r.short_time_spread, 0.0);
  EXPECT_EQ(r.late_spread, 0.0);
  ASSERT_EQ(r.entropy.size(), 1u);
  EXPECT_EQ(r.entropy[0].size(), times.size());
}

TEST(Sensitivity, DefaultPairStaysBelowLateSpread) {
  std::vector<double> times;
  for (int i = 1; i <= 400; ++i) times.push_back(0.03 * i);
  const SensitivityReport r = short_time_sbf_sensitivity(kDefaults, {0.05, 0.11}, times);
  EXPECT_LT(r.short_time_spread, r.late_spread);
  EXPECT_TRUE(r.free_diffusion_valid[0]);
  EXPECT_TRUE(r.free_diffusion_valid[1]);
}

TEST(Oracle, SmallCutoffAgreesWithGaussian) {
  const DynamicsModel m(kDefaults);
  const double t = 0.5 / m.bogo.epsilon;
  const FockOracleResult r = fock_dynamics_oracle(kDefaults, t);
  EXPECT_LT(r.tail_weight, 1e-11);
  EXPECT_NEAR(r.entropy, m.entropy(t), 1e-8);
  EXPECT_LT((r.mean - m.state(t).mean).norm(), 1e-7);
}

TEST(Oracle, ExplicitCutoffIsHonoured) {
  FockOracleOptions opts;
  opts.cutoff = 40;
  const FockOracleResult r = fock_dynamics_oracle(kDefaults, 0.3, opts);
  EXPECT_EQ(r.cutoff, 40);
  EXPECT_NEAR(r.entropy, dynamical_entropy(kDefaults, 0.3), 1e-4);
}
