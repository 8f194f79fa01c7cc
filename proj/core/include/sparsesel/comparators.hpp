#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sparsesel/types.hpp"

namespace sparsesel {

// ---------------------------------------------------------------------------
// Sure independence screening
// ---------------------------------------------------------------------------

/// Top-k columns by |x_j' y|. Meaningful on a standardized design.
SupportSet sis(const Dataset& data, Index k);

/// sis(data, k) for k = 1..k_max, nested.
std::vector<SupportSet> sis_path(const Dataset& data, Index k_max);

// ---------------------------------------------------------------------------
// Penalized least squares: (2n)^{-1} ||y - X beta||^2 + sum_j p_lambda(|beta_j|)
// ---------------------------------------------------------------------------

enum class PenaltyKind { lasso, scad };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::lasso;
  double a = 3.7;  // SCAD shape; ignored for lasso

  static PenaltySpec lasso() { return {PenaltyKind::lasso, 3.7}; }
  static PenaltySpec scad(double a = 3.7) { return {PenaltyKind::scad, a}; }
  /// Throws InvalidArgumentError when kind is scad and a <= 2.
  void validate() const;
  std::string_view name() const { return kind == PenaltyKind::lasso ? "lasso" : "scad"; }
};

/// p_lambda(t) for t >= 0.
double penalty_value(const PenaltySpec& spec, double lambda, double t);

/// Global minimizer over b of (v / 2) b^2 - z b + p_lambda(|b|), v > 0.
///
/// For the lasso this is soft thresholding, S(z, lambda) / v. For SCAD the
/// objective is piecewise quadratic on [0, lambda], [lambda, a lambda] and
/// [a lambda, inf); the minimizer of each piece is taken in closed form and the
/// best piece wins, which stays exact even when v (a - 1) <= 1 makes the
/// middle piece concave.
double coordinate_minimizer(const PenaltySpec& spec, double z, double v, double lambda);

struct PathOptions {
  double tol = 1e-7;        // max absolute coordinate change of a full sweep
  int max_sweeps = 10'000;  // per lambda
};

struct PathEntry {
  double lambda = 0.0;
  SupportSet support;
  Vector coefficients;  // dense, length p
  bool converged = true;
  int sweeps = 0;
};

struct SelectionPath {
  std::vector<PathEntry> entries;
};

/// max_j |n^{-1} x_j' y|: the smallest lambda at which the lasso solution is zero.
double lambda_max(const Dataset& data);

/// `count` log-spaced values from lambda_max down to ratio * lambda_max.
std::vector<double> default_lambda_grid(const Dataset& data, Index count = 100,
                                        double ratio = 1e-3);

/// Warm-started coordinate descent along a strictly decreasing positive grid.
SelectionPath penalized_path(const Dataset& data, const PenaltySpec& spec,
                             std::span<const double> lambdas, const PathOptions& options = {});

/// Objective value (2n)^{-1} ||y - X beta||^2 + sum_j p_lambda(|beta_j|).
double penalized_objective(const Dataset& data, const PenaltySpec& spec, double lambda,
                           const Vector& beta);

/// Fold membership: fold f holds the rows listed in result[f]. Rows are
/// permuted with the seed and dealt round-robin.
std::vector<std::vector<Index>> fold_assignment(Index n, Index folds, std::uint64_t seed);

struct CvResult {
  double lambda_star = 0.0;
  Index lambda_index = 0;
  std::vector<double> cv_error;  // pooled held-out mean squared error per lambda
};

/// K-fold cross-validation over the grid. The minimizer wins; near ties
/// (relative 1e-12) go to the larger lambda.
CvResult cross_validate(const Dataset& data, const PenaltySpec& spec,
                        std::span<const double> lambdas, Index folds, std::uint64_t seed,
                        const PathOptions& options = {});

/// (tpr, fdr) per path entry, in path order.
std::vector<SelectionMetrics> tpr_fdr_curve(const SelectionPath& path, const SupportSet& truth);

}  // namespace sparsesel
