#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sparsesel/comparators.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/iht.hpp"
#include "sparsesel/simgen.hpp"
#include "sparsesel/standardize.hpp"
#include "sparsesel/topk.hpp"

using namespace sparsesel;

TEST(Penalty, LassoSoftThreshold) {
  const auto lasso = PenaltySpec::lasso();
  EXPECT_DOUBLE_EQ(coordinate_minimizer(lasso, 2.5, 1.0, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(coordinate_minimizer(lasso, -2.5, 1.0, 1.0), -1.5);
  EXPECT_DOUBLE_EQ(coordinate_minimizer(lasso, 0.7, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(coordinate_minimizer(lasso, 3.0, 2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(penalty_value(lasso, 0.5, 3.0), 1.5);
}

TEST(Penalty, ScadValues) {
  const auto scad = PenaltySpec::scad(3.7);
  EXPECT_DOUBLE_EQ(penalty_value(scad, 1.0, 0.5), 0.5);
  EXPECT_NEAR(penalty_value(scad, 1.0, 10.0), 4.7 / 2.0, 1e-15);
  for (double t : {0.0, 0.3, 1.0, 2.0, 3.0, 3.7, 5.0})
    EXPECT_NEAR(penalty_value(scad, 1.0, t), oracle::scad_penalty(t, 1.0, 3.7), 1e-14);
  // Continuity at the knots.
  EXPECT_NEAR(penalty_value(scad, 1.0, 1.0 - 1e-9), penalty_value(scad, 1.0, 1.0 + 1e-9), 1e-8);
  EXPECT_NEAR(penalty_value(scad, 1.0, 3.7 - 1e-9), penalty_value(scad, 1.0, 3.7 + 1e-9), 1e-8);
}

TEST(Penalty, ScadMinimizerRegions) {
  const auto scad = PenaltySpec::scad(3.7);
  // Flat region: unpenalized beyond a * lambda.
  EXPECT_DOUBLE_EQ(coordinate_minimizer(scad, 5.0, 1.0, 1.0), 5.0);
  // Lasso-like region.
  EXPECT_DOUBLE_EQ(coordinate_minimizer(scad, 1.5, 1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(coordinate_minimizer(scad, 0.9, 1.0, 1.0), 0.0);
  // Middle region closed form ((a - 1) z - a lambda) / (a - 2).
  EXPECT_NEAR(coordinate_minimizer(scad, 3.0, 1.0, 1.0), (2.7 * 3.0 - 3.7) / 1.7, 1e-14);
}

TEST(Penalty, ScadMinimizerMatchesGridSearch) {
  const auto scad = PenaltySpec::scad(3.7);
  for (double z = -6.0; z <= 6.0; z += 0.173) {
    for (double lambda : {0.3, 1.0, 1.7}) {
      const double b = coordinate_minimizer(scad, z, 1.0, lambda);
      const double g = oracle::scad_grid_minimizer(z, lambda, 3.7, 1e-4);
      auto objective = [&](double t) {
        return 0.5 * t * t - z * t + oracle::scad_penalty(std::abs(t), lambda, 3.7);
      };
      EXPECT_LE(objective(b), objective(g) + 1e-12) << "z=" << z << " lambda=" << lambda;
      EXPECT_NEAR(b, g, 2e-4) << "z=" << z << " lambda=" << lambda;
    }
  }
}

TEST(Penalty, ScadNonUnitCurvatureIsGlobalMinimum) {
  const auto scad = PenaltySpec::scad(3.7);
  for (double v : {0.2, 0.3, 0.95, 2.0}) {
    for (double z = -4.0; z <= 4.0; z += 0.31) {
      const double b = coordinate_minimizer(scad, z, v, 1.0);
      auto objective = [&](double t) {
        return 0.5 * v * t * t - z * t + oracle::scad_penalty(std::abs(t), 1.0, 3.7);
      };
      double best = objective(0.0);
      for (double t = -30.0; t <= 30.0; t += 1e-3) best = std::min(best, objective(t));
      EXPECT_LE(objective(b), best + 1e-9) << "v=" << v << " z=" << z;
    }
  }
}

TEST(Penalty, Validation) {
  EXPECT_THROW(PenaltySpec::scad(2.0).validate(), InvalidArgumentError);
  EXPECT_NO_THROW(PenaltySpec::scad(2.5).validate());
  EXPECT_NO_THROW(PenaltySpec::lasso().validate());
}

namespace {

Dataset standardized_instance(Index n, Index p, Index s, double noise, std::uint64_t seed) {
  const auto inst = fixtures::gaussian_instance(n, p, s, noise, seed);
  return inst.data.with_design(standardize_columns(inst.data.x(), StandardizeMode::zscore));
}

}  // namespace

TEST(Path, LambdaMaxGivesNullModel) {
  const Dataset d = standardized_instance(60, 20, 3, 1.0, 1);
  const double lmax = lambda_max(d);
  const double direct = (d.x().transpose() * d.y()).cwiseAbs().maxCoeff() / 60.0;
  EXPECT_NEAR(lmax, direct, 1e-14 * direct);
  for (const auto& spec : {PenaltySpec::lasso(), PenaltySpec::scad()}) {
    const std::vector<double> grid{lmax * (1 + 1e-9), 0.5 * lmax};
    const auto path = penalized_path(d, spec, grid);
    EXPECT_TRUE(path.entries[0].support.empty());
    EXPECT_FALSE(path.entries[1].support.empty());
  }
}

TEST(Path, DefaultGridIsLogSpaced) {
  const Dataset d = standardized_instance(40, 10, 2, 1.0, 2);
  const auto grid = default_lambda_grid(d);
  ASSERT_EQ(grid.size(), 100u);
  EXPECT_DOUBLE_EQ(grid.front(), lambda_max(d));
  EXPECT_NEAR(grid.back(), 1e-3 * lambda_max(d), 1e-12 * lambda_max(d));
  for (std::size_t k = 1; k < grid.size(); ++k)
    EXPECT_NEAR(std::log(grid[k - 1] / grid[k]), std::log(1e3) / 99.0, 1e-10);
}

TEST(Path, RejectsNonDecreasingGrid) {
  const Dataset d = standardized_instance(20, 5, 2, 1.0, 3);
  const std::vector<double> bad{0.1, 0.2};
  EXPECT_THROW(penalized_path(d, PenaltySpec::lasso(), bad), InvalidArgumentError);
  const std::vector<double> negative{0.1, -0.2};
  EXPECT_THROW(penalized_path(d, PenaltySpec::lasso(), negative), InvalidArgumentError);
}

TEST(Path, LassoSatisfiesOptimalityConditions) {
  const Dataset d = standardized_instance(80, 30, 4, 1.0, 4);
  const auto grid = default_lambda_grid(d, 30, 1e-2);
  const PathOptions opts{.tol = 1e-10, .max_sweeps = 100000};
  const auto path = penalized_path(d, PenaltySpec::lasso(), grid, opts);
  for (const auto& e : path.entries) {
    ASSERT_TRUE(e.converged);
    const Vector corr = d.x().transpose() * (d.y() - d.x() * e.coefficients) / 80.0;
    for (Index j = 0; j < 30; ++j) {
      if (e.coefficients[j] != 0.0)
        EXPECT_NEAR(corr[j], e.lambda * (e.coefficients[j] > 0 ? 1.0 : -1.0), 1e-7);
      else
        EXPECT_LE(std::abs(corr[j]), e.lambda + 1e-7);
    }
  }
}

TEST(Path, OrthogonalDesignHasClosedForm) {
  const Index n = 50, p = 8;
  const Matrix x = fixtures::orthonormal_design(n, p, 5, std::sqrt(static_cast<double>(n)));
  std::mt19937_64 gen(5);
  const Vector y = oracle::gaussian(n, gen) * 3.0;
  const Dataset d(x, y);
  const Vector z = x.transpose() * y / static_cast<double>(n);
  const std::vector<double> grid{0.4, 0.2, 0.05};
  for (const auto& spec : {PenaltySpec::lasso(), PenaltySpec::scad()}) {
    const auto path = penalized_path(d, spec, grid, {.tol = 1e-12, .max_sweeps = 1000});
    for (const auto& e : path.entries)
      for (Index j = 0; j < p; ++j)
        EXPECT_NEAR(e.coefficients[j], coordinate_minimizer(spec, z[j], 1.0, e.lambda), 1e-9);
  }
}

TEST(Path, ObjectiveNotAboveWarmStart) {
  const Dataset d = standardized_instance(60, 25, 4, 1.0, 6);
  const auto grid = default_lambda_grid(d, 20, 1e-2);
  for (const auto& spec : {PenaltySpec::lasso(), PenaltySpec::scad()}) {
    const auto path = penalized_path(d, spec, grid);
    Vector previous = Vector::Zero(25);
    for (const auto& e : path.entries) {
      EXPECT_LE(penalized_objective(d, spec, e.lambda, e.coefficients),
                penalized_objective(d, spec, e.lambda, previous) + 1e-12);
      EXPECT_EQ(e.support, SupportSet::nonzeros(e.coefficients));
      previous = e.coefficients;
    }
  }
}

TEST(CrossValidation, FoldsPartitionRows) {
  const auto folds = fold_assignment(23, 5, 7);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<int> seen(23, 0);
  for (const auto& f : folds) {
    EXPECT_TRUE(f.size() == 4 || f.size() == 5);
    for (Index i : f) ++seen[static_cast<std::size_t>(i)];
  }
  for (int c : seen) EXPECT_EQ(c, 1);
  EXPECT_EQ(fold_assignment(23, 5, 7), folds);
  EXPECT_NE(fold_assignment(23, 5, 8), folds);
  EXPECT_THROW(fold_assignment(3, 5, 1), InvalidArgumentError);
}

TEST(CrossValidation, MatchesHandRolledLeaveOneOut) {
  const Dataset d = standardized_instance(10, 4, 2, 0.5, 8);
  const std::vector<double> grid{0.5, 0.2, 0.05};
  const PathOptions opts{.tol = 1e-12, .max_sweeps = 100000};
  const CvResult cv = cross_validate(d, PenaltySpec::lasso(), grid, 10, 3, opts);
  std::vector<double> expected(grid.size(), 0.0);
  for (Index i = 0; i < 10; ++i) {
    std::vector<Index> train;
    for (Index r = 0; r < 10; ++r)
      if (r != i) train.push_back(r);
    const Dataset sub(select_rows(d.x(), train), select_rows(d.y(), train));
    const auto path = penalized_path(sub, PenaltySpec::lasso(), grid, opts);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double r = d.y()[i] - d.x().row(i).dot(path.entries[k].coefficients);
      expected[k] += r * r / 10.0;
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_NEAR(cv.cv_error[k], expected[k], 1e-9);
  const auto best = std::min_element(expected.begin(), expected.end()) - expected.begin();
  EXPECT_EQ(cv.lambda_index, best);
  EXPECT_DOUBLE_EQ(cv.lambda_star, grid[static_cast<std::size_t>(best)]);
}

TEST(CrossValidation, PureNoiseFavorsSparseModels) {
  std::mt19937_64 gen(9);
  const Matrix x = standardize_columns(oracle::gaussian(100, 20, gen), StandardizeMode::zscore);
  const Vector y = oracle::gaussian(100, gen);
  const Dataset d(x, y);
  const auto grid = default_lambda_grid(d, 50, 1e-2);
  const CvResult cv = cross_validate(d, PenaltySpec::lasso(), grid, 5, 1);
  const auto path = penalized_path(d, PenaltySpec::lasso(), std::span(grid).first(
                                                                 static_cast<std::size_t>(cv.lambda_index) + 1));
  EXPECT_LE(path.entries.back().support.size(), 8);
}

TEST(CrossValidation, StrongSignalsAreKept) {
  int kept = 0;
  SimConfig cfg;
  cfg.p = 50;
  cfg.s = 3;
  cfg.sigma = 0.3;
  cfg.beta_min = 1.0;
  cfg.n_override = 100;
  cfg.cov = CovarianceSpec::identity(50);
  cfg.seed = 77;
  const SimulationDesign design(cfg);
  for (int r = 0; r < 100; ++r) {
    const auto rep = design.replicate(static_cast<std::uint64_t>(r));
    const Dataset d = rep.data.with_design(standardize_columns(rep.data.x(), StandardizeMode::zscore));
    const auto grid = default_lambda_grid(d, 100, 1e-3);
    const CvResult cv = cross_validate(d, PenaltySpec::lasso(), grid, 5, static_cast<std::uint64_t>(r));
    const auto path = penalized_path(d, PenaltySpec::lasso(),
                                     std::span(grid).first(static_cast<std::size_t>(cv.lambda_index) + 1));
    if (rep.truth.is_subset_of(path.entries.back().support)) ++kept;
  }
  EXPECT_GE(kept, 95);
}

TEST(Sis, ExamplesAndNesting) {
  const Matrix x = fixtures::orthonormal_design(20, 6, 11);
  Vector beta = Vector::Zero(6);
  beta[1] = 1.0;
  beta[3] = -4.0;
  beta[4] = 2.0;
  const Dataset d(x, x * beta);
  EXPECT_EQ(sis(d, 1), (SupportSet{3}));
  EXPECT_EQ(sis(d, 2), (SupportSet{3, 4}));
  EXPECT_EQ(sis(d, 3), (SupportSet{1, 3, 4}));
  const auto path = sis_path(d, 6);
  for (Index k = 1; k <= 6; ++k) {
    EXPECT_EQ(path[static_cast<std::size_t>(k - 1)], sis(d, k));
    if (k > 1) EXPECT_TRUE(path[static_cast<std::size_t>(k - 2)].is_subset_of(path[static_cast<std::size_t>(k - 1)]));
  }
}

TEST(Sis, EqualsFirstIhtExpansion) {
  const Dataset d = standardized_instance(40, 30, 4, 1.0, 12);
  for (Index l : {1, 3, 7}) {
    const IhtConfig cfg{.pi = 5, .l = l, .s_hat = 5};
    EXPECT_EQ(iht_step(d, Vector::Zero(30), cfg).record.expanded, sis(d, l));
  }
}

TEST(Curves, TprFdrPerEntry) {
  SelectionPath path;
  path.entries.push_back({.lambda = 1.0, .support = {}});
  path.entries.push_back({.lambda = 0.5, .support = {0}});
  path.entries.push_back({.lambda = 0.1, .support = {0, 4}});
  const auto curve = tpr_fdr_curve(path, {0, 1});
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_DOUBLE_EQ(curve[0].tpr, 0.0);
  EXPECT_DOUBLE_EQ(curve[0].fdr, 0.0);
  EXPECT_DOUBLE_EQ(curve[1].tpr, 0.5);
  EXPECT_DOUBLE_EQ(curve[2].fdr, 0.5);
}
