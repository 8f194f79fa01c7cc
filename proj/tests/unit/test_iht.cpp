#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/iht.hpp"
#include "sparsesel/linalg.hpp"
#include "sparsesel/metrics.hpp"
#include "sparsesel/simgen.hpp"
#include "sparsesel/standardize.hpp"
#include "sparsesel/topk.hpp"

using namespace sparsesel;

TEST(Loss, Examples) {
  const auto inst = fixtures::gaussian_instance(15, 6, 2, 0.0, 1);
  const Dataset& d = inst.data;
  EXPECT_DOUBLE_EQ(loss(d, Vector::Zero(6)), d.y().squaredNorm());
  EXPECT_LE(loss(d, inst.beta), 1e-24 * d.y().squaredNorm());
  const auto noisy = fixtures::gaussian_instance(15, 6, 2, 1.0, 2);
  const SupportSet s{0, 3, 5};
  const FitResult fit = ols_fit(noisy.data, s);
  EXPECT_NEAR(loss(noisy.data, fit.dense(6)), rss(noisy.data, s), 1e-9 * fit.rss);
}

TEST(Gradient, ClosedFormAndNormalEquations) {
  const auto inst = fixtures::gaussian_instance(20, 7, 3, 0.5, 3);
  const Dataset& d = inst.data;
  EXPECT_LE((gradient(d, Vector::Zero(7)) + 2.0 * d.x().transpose() * d.y()).norm(), 1e-12);
  const SupportSet s{1, 2, 6};
  const Vector g = gradient(d, ols_fit(d, s).dense(7));
  const double scale = d.x().norm() * d.y().norm();
  for (Index j : s) EXPECT_LE(std::abs(g[j]), 1e-8 * scale);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 gen(31);
  const auto inst = fixtures::gaussian_instance(25, 6, 2, 1.0, 4);
  const Dataset& d = inst.data;
  for (int point = 0; point < 20; ++point) {
    const Vector beta = oracle::gaussian(6, gen);
    const Vector fd = oracle::finite_difference([&](const Vector& b) { return loss(d, b); }, beta, 1e-5);
    const Vector g = gradient(d, beta);
    EXPECT_LE((g - fd).norm(), 1e-5 * g.norm());
  }
}

TEST(IhtStep, SingleDominantCoordinate) {
  const Matrix x = fixtures::orthonormal_design(12, 6, 5);
  const Dataset d(x, 5.0 * x.col(0));
  const IhtConfig cfg{.pi = 1, .l = 1, .s_hat = 1};
  const IhtStep step = iht_step(d, Vector::Zero(6), cfg);
  EXPECT_EQ(step.support_next, (SupportSet{0}));
  EXPECT_NEAR(step.beta_next[0], 5.0, 1e-12);
  EXPECT_NEAR(step.record.loss, 0.0, 1e-20);
}

TEST(IhtStep, FixedPointAtBestSubset) {
  const auto inst = fixtures::gaussian_instance(30, 10, 3, 0.0, 6);
  const Dataset& d = inst.data;
  const FitResult fit = ols_fit(d, {0, 1, 2});
  const IhtConfig cfg{.pi = 3, .l = 2, .s_hat = 3};
  const IhtStep step = iht_step(d, fit.dense(10), cfg);
  EXPECT_EQ(step.support_next, (SupportSet{0, 1, 2}));
  EXPECT_LE((step.beta_next - fit.dense(10)).norm(), 1e-10 * inst.beta.norm());
}

TEST(IhtStep, MatchesStraightLineTranscription) {
  const auto inst = fixtures::gaussian_instance(40, 15, 4, 0.8, 7);
  const Dataset& d = inst.data;
  const IhtConfig cfg{.pi = 5, .l = 3, .s_hat = 5};
  Vector beta = Vector::Zero(15);
  for (int t = 0; t < 6; ++t) {
    // Oracle transcription of one iteration.
    const Vector grad = 2.0 * d.x().transpose() * (d.x() * beta - d.y());
    std::set<Index> expanded_set;
    for (Index j = 0; j < 15; ++j)
      if (beta[j] != 0.0) expanded_set.insert(j);
    for (Index j : oracle::top_abs(grad, cfg.l)) expanded_set.insert(j);
    const std::vector<Index> expanded(expanded_set.begin(), expanded_set.end());
    const Vector dagger = oracle::normal_equations(d.x(), d.y(), expanded);
    std::vector<Index> local = oracle::top_abs(dagger, std::min<Index>(cfg.pi, dagger.size()));
    std::vector<Index> projected;
    for (Index k : local) projected.push_back(expanded[static_cast<std::size_t>(k)]);
    const Vector coef = oracle::normal_equations(d.x(), d.y(), projected);
    Vector next = Vector::Zero(15);
    for (std::size_t k = 0; k < projected.size(); ++k) next[projected[k]] = coef[static_cast<Index>(k)];

    const IhtStep step = iht_step(d, beta, cfg);
    EXPECT_EQ(step.record.expanded, SupportSet(expanded));
    EXPECT_EQ(step.record.projected, SupportSet(projected));
    EXPECT_LE((step.beta_next - next).norm(), 1e-9 * next.norm());
    EXPECT_NEAR(step.record.loss, (d.y() - d.x() * next).squaredNorm(), 1e-9 * d.y().squaredNorm());
    EXPECT_NEAR(step.record.change, (next - beta).norm(), 1e-9 * (1.0 + next.norm()));
    beta = step.beta_next;
  }
}

TEST(IhtRun, ExactRecoveryOrthonormal) {
  const Index n = 20, p = 12;
  const Matrix x = fixtures::orthonormal_design(n, p, 9);
  Vector beta = Vector::Zero(p);
  beta[2] = 3.0;
  beta[5] = -2.0;
  beta[9] = 1.5;
  const Dataset d(x, x * beta);
  const IhtConfig cfg{.pi = 4, .l = 3, .s_hat = 3};
  const IhtResult r = iht_run(d, cfg);
  EXPECT_EQ(r.selected, (SupportSet{2, 5, 9}));
  EXPECT_TRUE(r.converged());
  EXPECT_LE(r.trace.iterations.size(), 2u);
  EXPECT_LE(loss(d, r.beta), 1e-20);
}

TEST(IhtSelect, SmallModelUsesCoefficientsOnly) {
  const Vector beta{{0.0, 3.0, -1.0, 2.0, 0.0}};
  const Vector grad{{10.0, 0.0, 0.0, 0.0, -9.0}};
  EXPECT_EQ(iht_select(beta, grad, 2, 3), (SupportSet{1, 3}));
}

TEST(IhtSelect, OverlapIsPaddedToExactSize) {
  const Vector beta{{5.0, 4.0, 0.0, 0.0, 0.0}};
  const Vector grad{{9.0, 1.0, 8.0, 7.0, 0.0}};
  // The two largest gradient coordinates are {0, 2}; 0 is already chosen.
  EXPECT_EQ(iht_select(beta, grad, 4, 2), (SupportSet{0, 1, 2, 3}));
}

TEST(IhtSelect, PathAgreesWithPointwiseSelection) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    Vector beta = Vector::Zero(30);
    for (Index j : oracle::top_abs(oracle::gaussian(30, gen), 8)) beta[j] = oracle::gaussian(1, gen)[0];
    const Vector grad = oracle::gaussian(30, gen);
    const auto path = iht_selection_path(beta, grad, 8, 30);
    ASSERT_EQ(path.size(), 30u);
    for (Index s = 1; s <= 30; ++s) {
      EXPECT_EQ(path[static_cast<std::size_t>(s - 1)], iht_select(beta, grad, s, 8));
      EXPECT_EQ(path[static_cast<std::size_t>(s - 1)].size(), s);
    }
  }
}

TEST(IhtRun, StepInvariantsAndDeterminism) {
  const auto inst = fixtures::gaussian_instance(50, 40, 5, 1.0, 21);
  const Dataset& d = inst.data;
  const IhtConfig cfg{.pi = 8, .l = 4, .s_hat = 10, .tol = 0.0, .max_iter = 50};
  Vector beta = Vector::Zero(40);
  SupportSet support;
  for (int t = 0; t < 10; ++t) {
    const IhtStep step = iht_step(d, beta, support, cfg);
    const double refit_loss = ols_fit(d, step.record.expanded).rss;
    EXPECT_LE(refit_loss, loss(d, beta) + 1e-9 * d.y().squaredNorm());
    EXPECT_TRUE(step.support_next.is_subset_of(step.record.expanded));
    EXPECT_LE(step.support_next.size(), cfg.pi);
    EXPECT_GE(step.record.loss, 0.0);
    beta = step.beta_next;
    support = step.support_next;
  }
  const IhtResult a = iht_run(d, cfg);
  const IhtResult b = iht_run(d, cfg);
  ASSERT_EQ(a.trace.iterations.size(), b.trace.iterations.size());
  for (std::size_t t = 0; t < a.trace.iterations.size(); ++t) {
    EXPECT_EQ(a.trace.iterations[t].projected, b.trace.iterations[t].projected);
    EXPECT_EQ(a.trace.iterations[t].loss, b.trace.iterations[t].loss);
  }
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.selected.size(), 10);
}

TEST(IhtRun, GradientScaleDoesNotChangeExpansion) {
  const auto inst = fixtures::gaussian_instance(30, 20, 3, 1.0, 22);
  const Vector beta = ols_fit(inst.data, {0, 4}).dense(20);
  const Vector g = gradient(inst.data, beta);
  for (double c : {0.5, 1.0, 1e3}) EXPECT_EQ(topk_abs(c * g, 4), topk_abs(g, 4));
}

TEST(IhtConfig, Validation) {
  const auto inst = fixtures::gaussian_instance(10, 8, 2, 1.0, 1);
  EXPECT_THROW((IhtConfig{.pi = 6, .l = 5, .s_hat = 2}).validate(inst.data), InvalidArgumentError);
  EXPECT_THROW((IhtConfig{.pi = 0, .l = 1, .s_hat = 2}).validate(inst.data), InvalidArgumentError);
  EXPECT_NO_THROW((IhtConfig{.pi = 5, .l = 5, .s_hat = 8}).validate(inst.data));
  const auto advice = advise_iht_parameters(2.0, 50, 3, 3);
  EXPECT_TRUE(advice.expansion_ok);
  EXPECT_TRUE(advice.projection_ok);
  EXPECT_DOUBLE_EQ(advice.min_projection, 48.0);
  EXPECT_FALSE(advise_iht_parameters(2.0, 40, 3, 4).projection_ok);
}

TEST(TwoStage, NoiselessAndRestriction) {
  const Matrix x = fixtures::orthonormal_design(20, 12, 10);
  Vector beta = Vector::Zero(12);
  beta[1] = 2.0;
  beta[7] = -3.0;
  const Dataset d(x, x * beta);
  const IhtConfig cfg{.pi = 4, .l = 2, .s_hat = 4};
  EXPECT_EQ(two_stage(d, cfg, 2).best.support, (SupportSet{1, 7}));

  // With pi = 1 the candidate holds only the strongest variable; the second stage
  // can only choose among candidates.
  const IhtConfig narrow{.pi = 1, .l = 1, .s_hat = 1};
  const BssResult r = two_stage(d, narrow, 1);
  EXPECT_EQ(r.best.support, (SupportSet{7}));
  EXPECT_THROW(two_stage(d, narrow, 2), InvalidArgumentError);
}

namespace {

struct ReducedScaleCounts {
  int screened = 0;
  int recovered = 0;
};

ReducedScaleCounts reduced_scale_study(int replicates) {
  SimConfig cfg;
  cfg.p = 100;
  cfg.s = 5;
  cfg.sigma = 0.1;
  cfg.cov = CovarianceSpec::exp_decay(100, 0.5);
  cfg.seed = 2024;
  const SimulationDesign design(cfg);
  EXPECT_EQ(cfg.n(), 47);
  ReducedScaleCounts counts;
  for (int r = 0; r < replicates; ++r) {
    const auto rep = design.replicate(static_cast<std::uint64_t>(r));
    const Dataset data = rep.data.with_design(standardize_columns(rep.data.x(), StandardizeMode::zscore));
    const IhtConfig iht{.pi = 20, .l = 5, .s_hat = 20};
    const IhtResult fit = iht_run(data, iht);
    if (tpr(fit.selected, rep.truth) == 1.0) ++counts.screened;
    if (best_subset_on_support(data, 5, fit.support).best.support == rep.truth) ++counts.recovered;
  }
  return counts;
}

}  // namespace

TEST(IhtRun, ReducedScaleSureScreeningAndTwoStage) {
  const auto counts = reduced_scale_study(100);
  EXPECT_GE(counts.screened, 90);
  EXPECT_GE(counts.recovered, 90);
}
