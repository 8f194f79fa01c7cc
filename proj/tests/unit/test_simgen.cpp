#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "sparsesel/errors.hpp"
#include "sparsesel/rng.hpp"
#include "sparsesel/simgen.hpp"

using namespace sparsesel;

TEST(Covariance, ExpDecayExamples) {
  RngStream rng(1);
  const Matrix s = gen_covariance(CovarianceSpec::exp_decay(4, 0.5), rng);
  EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(s(0, 3), 0.125);
  EXPECT_DOUBLE_EQ(s(3, 1), 0.25);
  const Matrix id = gen_covariance(CovarianceSpec::identity(3), rng);
  EXPECT_EQ(id, Matrix::Identity(3, 3));
  const Matrix c = gen_covariance(CovarianceSpec::constant(3, 0.3), rng);
  EXPECT_DOUBLE_EQ(c(0, 2), 0.3);
  EXPECT_DOUBLE_EQ(c(1, 1), 1.0);
}

TEST(Covariance, FactorModelStructure) {
  RngStream a(5), b(5);
  const Index p = 30;
  const auto spec = CovarianceSpec::spiky_strong(p);
  ASSERT_EQ(spec.spikes.size(), 2u);
  EXPECT_DOUBLE_EQ(spec.spikes[0], 60.0);
  EXPECT_DOUBLE_EQ(CovarianceSpec::spiky_weak(p).spikes[1], std::sqrt(30.0));
  const Matrix v = gen_factor_loadings(p, 2, a);
  EXPECT_LE((v.transpose() * v - Matrix::Identity(2, 2)).norm(), 1e-12);
  const Matrix sigma = gen_covariance(spec, b);
  const Matrix expected = v * Vector{{60.0, 30.0}}.asDiagonal() * v.transpose() + Matrix::Identity(p, p);
  EXPECT_LE((sigma - expected).norm(), 1e-10 * expected.norm());
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(sigma).eigenvalues();
  EXPECT_NEAR(ev[p - 1], 61.0, 1e-9);
  EXPECT_NEAR(ev[p - 2], 31.0, 1e-9);
  EXPECT_NEAR(ev[p - 3], 1.0, 1e-9);
}

TEST(Covariance, Validation) {
  EXPECT_THROW(CovarianceSpec::exp_decay(4, 1.0).validate(), InvalidArgumentError);
  EXPECT_THROW(CovarianceSpec::factor(4, {1.0, -1.0}).validate(), InvalidArgumentError);
  EXPECT_THROW(CovarianceSpec::factor(1, {1.0, 1.0}).validate(), InvalidArgumentError);
  EXPECT_EQ(parse_covariance_kind(to_string(CovarianceSpec::Kind::factor)), CovarianceSpec::Kind::factor);
  EXPECT_THROW(parse_covariance_kind("banded"), InvalidArgumentError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = bad(1, 0) = 2.0;
  EXPECT_THROW(covariance_root(bad), InvalidCovarianceError);
  bad(1, 0) = 0.0;
  EXPECT_THROW(covariance_root(bad), InvalidCovarianceError);
}

TEST(Covariance, RootSquaresBack) {
  RngStream rng(2);
  const Matrix s = gen_covariance(CovarianceSpec::exp_decay(12, 0.7), rng);
  const Matrix r = covariance_root(s);
  EXPECT_LE((r * r - s).norm(), 1e-12 * s.norm());
  EXPECT_LE((r - r.transpose()).norm(), 1e-14);
}

TEST(SimConfig, SampleSizeAndValidation) {
  EXPECT_EQ(default_sample_size(5, 100), 47);
  EXPECT_EQ(default_sample_size(10, 200), 106);
  EXPECT_EQ(default_sample_size(50, 1000), 691);
  SimConfig cfg;
  cfg.p = 10;
  cfg.s = 11;
  cfg.cov = CovarianceSpec::identity(10);
  EXPECT_THROW(cfg.validate(), InvalidArgumentError);
  cfg.s = 2;
  cfg.n_override = 7;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.n(), 7);
  cfg.cov = CovarianceSpec::identity(9);
  EXPECT_THROW(cfg.validate(), InvalidArgumentError);
}

TEST(Signal, AboveMinimumAndChiSquaredMean) {
  SimConfig cfg;
  cfg.p = 100000;
  cfg.s = 100000;
  cfg.beta_min = 0.1;
  cfg.cov = CovarianceSpec::identity(cfg.p);
  RngStream rng(3);
  const Vector beta = gen_beta(cfg, rng);
  EXPECT_GE(beta.minCoeff(), 0.1);
  // E[1 + Z^2] = 2.
  EXPECT_NEAR(beta.mean() / 0.1, 2.0, 0.02);
  cfg.signal = SignalKind::fixed;
  cfg.p = cfg.s = 5;
  cfg.cov = CovarianceSpec::identity(5);
  EXPECT_EQ(gen_beta(cfg, rng), Vector::Constant(5, 0.1));
}

TEST(Sampling, MomentsMatchPopulation) {
  RngStream rng(4);
  const Matrix sigma = gen_covariance(CovarianceSpec::exp_decay(5, 0.6), rng);
  Vector beta = Vector::Zero(5);
  beta[0] = 1.0;
  beta[2] = -2.0;
  const Dataset d = sample_dataset(covariance_root(sigma), 10000, beta, 0.5, rng);
  const Matrix emp = d.x().transpose() * d.x() / 10000.0;
  EXPECT_LE((emp - sigma).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LE(d.x().colwise().mean().cwiseAbs().maxCoeff(), 0.05);
  const Vector resid = d.y() - d.x() * beta;
  EXPECT_NEAR(resid.squaredNorm() / 10000.0, 0.25, 0.015);
  EXPECT_LE(std::abs(resid.mean()), 0.02);
}

TEST(Sampling, NoiseAugmentationCorrelation) {
  RngStream rng(6);
  const Dataset base = sample_dataset(Matrix::Identity(3, 3), 10000, Vector::Ones(3), 1.0, rng);
  const Dataset aug = augment_noise(base, 4, rng);
  ASSERT_EQ(aug.p(), 7);
  EXPECT_EQ(aug.x().leftCols(3), base.x());
  EXPECT_EQ(aug.y(), base.y());
  const Matrix noise = aug.x().rightCols(4);
  const Matrix cov = noise.transpose() * noise / 10000.0;
  for (Index a = 0; a < 4; ++a) {
    EXPECT_NEAR(cov(a, a), 1.0, 0.05);
    for (Index b = 0; b < a; ++b) EXPECT_NEAR(cov(a, b) / std::sqrt(cov(a, a) * cov(b, b)), 0.5, 0.03);
    for (Index j = 0; j < 3; ++j) EXPECT_NEAR((noise.col(a).dot(base.x().col(j))) / 10000.0, 0.0, 0.05);
  }
}

TEST(Design, ReplicatesAreDeterministicAndIndependent) {
  SimConfig cfg;
  cfg.p = 40;
  cfg.s = 4;
  cfg.sigma = 0.5;
  cfg.cov = CovarianceSpec::factor(40, {5.0});
  cfg.seed = 99;
  const SimulationDesign a(cfg), b(cfg);
  EXPECT_EQ(a.sigma, b.sigma);
  const auto r0 = a.replicate(0);
  const auto r0b = b.replicate(0);
  const auto r1 = a.replicate(1);
  EXPECT_EQ(r0.data.x(), r0b.data.x());
  EXPECT_EQ(r0.data.y(), r0b.data.y());
  EXPECT_EQ(r0.beta, r0b.beta);
  EXPECT_NE(r0.data.x(), r1.data.x());
  EXPECT_NE(r0.beta, r1.beta);
  EXPECT_EQ(r0.truth, SupportSet::range(4));
  EXPECT_EQ(r0.data.n(), default_sample_size(4, 40));
  // Evaluating replicates out of order does not change them.
  const auto late = SimulationDesign(cfg).replicate(1);
  EXPECT_EQ(late.data.x(), r1.data.x());
  cfg.seed = 100;
  EXPECT_NE(SimulationDesign(cfg).replicate(0).data.x(), r0.data.x());
}
