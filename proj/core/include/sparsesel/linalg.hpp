#pragma once

#include <cstdint>

#include "sparsesel/types.hpp"

namespace sparsesel {

/// Pivot threshold, relative to the largest pivot, below which a column of the
/// restricted design is treated as linearly dependent.
inline constexpr double kRankThreshold = 1e-10;

/// Minimum-norm least-squares solution of min ||b - A c||, computed with a
/// column-pivoted complete orthogonal decomposition.
Vector least_squares(const Matrix& a, const Vector& b);

/// OLS of y on the columns in s. Throws OverParameterizedError when |s| > n.
FitResult ols_fit(const Dataset& data, const SupportSet& s);

/// R_S = y'(I - P_S) y.
double rss(const Dataset& data, const SupportSet& s);

/// (I - P_S) v, where P_S projects onto the column span of X_S.
Vector projection_residual(const Dataset& data, const SupportSet& s, const Vector& v);
/// Same for every column of V.
Matrix projection_residual(const Dataset& data, const SupportSet& s, const Matrix& v);

/// n^{-1} X'X.
Matrix sample_covariance(const Matrix& x);

/// Schur complement of the sample covariance for the missed true predictors
/// S0 = s_true \ s given s:
///
///     D(S) = Sigma[S0,S0] - Sigma[S0,S] Sigma[S,S]^{-1} Sigma[S,S0]
///
/// Returns a |S0| x |S0| symmetric matrix (0 x 0 when s covers s_true).
/// Throws SingularBlockError when Sigma[S,S] has condition number above 1e12.
Matrix conditional_cov(const Dataset& data, const SupportSet& s_true, const SupportSet& s);

struct RestrictedEigenvalues {
  double upper = 0.0;  // max over |S| = k of lambda_max(Sigma[S,S])
  double lower = 0.0;  // min over |S| = k of lambda_min(Sigma[S,S])
  bool exact = false;  // false: Monte Carlo estimate over `subsets_examined` random subsets
  std::uint64_t subsets_examined = 0;
  SupportSet upper_set;
  SupportSet lower_set;
};

/// Extreme eigenvalues of k x k principal blocks of sigma_hat. Blocks smaller
/// than k are covered by eigenvalue interlacing, so only |S| = k is visited.
/// Enumerates all C(p, k) blocks when that count is within budget; otherwise
/// samples `budget` blocks uniformly (seeded), giving a lower estimate of the
/// upper value and an upper estimate of the lower value.
RestrictedEigenvalues restricted_eigs(const Matrix& sigma_hat, Index k, std::uint64_t budget,
                                      std::uint64_t seed = 0);
RestrictedEigenvalues restricted_eigs(const Dataset& data, Index k, std::uint64_t budget,
                                      std::uint64_t seed = 0);

/// Principal submatrix sigma[s, s].
Matrix principal_block(const Matrix& sigma, const SupportSet& rows, const SupportSet& cols);

}  // namespace sparsesel
