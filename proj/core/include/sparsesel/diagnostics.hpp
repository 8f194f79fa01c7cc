#pragma once

#include <cstdint>

#include "sparsesel/types.hpp"

namespace sparsesel {

/// Controls the combinatorial searches below. Families larger than `budget`
/// are either sampled (`budget` uniform draws, result flagged inexact) or
/// rejected with BudgetExceededError.
struct EnumerationOptions {
  std::uint64_t budget = 1'000'000;
  bool allow_sampling = true;
  std::uint64_t seed = 0;
};

struct SeparationReport {
  double tau_star = 0.0;
  SupportSet achieving_set;
  bool exact = true;
  std::uint64_t subsets_examined = 0;
  std::uint64_t family_size = 0;  // saturating
};

/// Minimum separation margin over false active sets
///
///     min  beta*_{S0}' D(S) beta*_{S0} / |S \ S*|,   S0 = S* \ S,
///
/// over |S| = s_hat with S* not contained in S and |S0| >= delta * s. With
/// s_hat = s and delta = 0 this is the margin over all size-s sets other than S*.
/// The quadratic form is evaluated as n^{-1} ||(I - P_S) X_{S0} beta*_{S0}||^2.
/// A sampled result is an upper estimate of the true minimum.
SeparationReport tau_star(const Dataset& data, const Vector& beta_true, Index s_hat, double delta,
                          const EnumerationOptions& options = {});

struct LambdaMReport {
  double value = 0.0;
  SupportSet achieving_set;
  bool exact = true;
  std::uint64_t subsets_examined = 0;
};

/// min over |S| = s, S != S* of lambda_min(D(S)).
LambdaMReport lambda_m(const Dataset& data, const SupportSet& s_true,
                       const EnumerationOptions& options = {});

struct BetaMinThreshold {
  double value = 0.0;
  /// False when lambda_m is (numerically) zero; value is then +inf.
  bool recoverable = true;
};

/// Smallest |beta*_j| for which recovery is guaranteed, up to universal constants:
/// (4 xi sigma / (1 - eta)) sqrt(log p / (n lambda_m)).
/// lambda_m <= 1e-10 is treated as zero separation.
BetaMinThreshold beta_min_threshold(double lambda_m_value, Index n, Index p, double sigma,
                                    double xi = 2.0, double eta = 0.5);

struct TauSupReport {
  double value = 0.0;
  SupportSet achieving_set;
};

/// max over single swaps S = (S* \ {j0}) ∪ {k}, k outside S*, of D(S) (beta*_{j0})^2.
TauSupReport tau_sup(const Dataset& data, const Vector& beta_true, Index j0);

/// || Sigma[S*^c, S*] Sigma[S*, S*]^{-1} signs ||_inf. The irrepresentable
/// condition holds when the value is below 1.
double irrepresentable(const Dataset& data, const SupportSet& s_true, const Vector& signs);

struct KappaReport {
  double kappa = 0.0;
  double upper = 0.0;  // L, over blocks of size min(2 pi + l, p)
  double lower = 0.0;  // alpha, over blocks of size min(2 pi + s, p)
  Index upper_size = 0;
  Index lower_size = 0;
  bool exact = true;
  /// alpha numerically zero; kappa is +inf.
  bool degenerate = false;
};

KappaReport kappa(const Dataset& data, Index pi, Index l, Index s,
                  const EnumerationOptions& options = {});

}  // namespace sparsesel
