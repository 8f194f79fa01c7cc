#pragma once

#include <cstdint>
#include <vector>

#include "sparsesel/types.hpp"

namespace sparsesel {

/// Default cap on the number of subsets an exhaustive search may visit.
inline constexpr std::uint64_t kDefaultSubsetBudget = 5'000'000;

struct BssResult {
  FitResult best;
  /// Number of subsets whose RSS is within 1e-9 * ||y||^2 of the minimum.
  std::uint64_t tie_count = 1;
  std::uint64_t subsets_examined = 0;
  /// The tied supports in lexicographic order; best.support is the first.
  std::vector<SupportSet> tied;
};

/// Relative tolerance (times ||y||^2) under which two RSS values count as tied.
inline constexpr double kTieTolerance = 1e-9;

/// Exhaustive best subset selection: argmin of R_S over |S| = s_hat.
/// Ties resolve to the lexicographically smallest support.
/// Throws BudgetExceededError when C(p, s_hat) > budget and InvalidArgumentError
/// when s_hat is outside [1, min(n, p)].
BssResult best_subset(const Dataset& data, Index s_hat,
                      std::uint64_t budget = kDefaultSubsetBudget);

/// Best subset restricted to subsets of `candidate`.
BssResult best_subset_on_support(const Dataset& data, Index s_hat, const SupportSet& candidate,
                                 std::uint64_t budget = kDefaultSubsetBudget);

/// R_S <= R_{S_truth} + n * eta * tau.
bool near_best_margin(const Dataset& data, const SupportSet& s, const SupportSet& s_truth,
                      double eta, double tau);

}  // namespace sparsesel
