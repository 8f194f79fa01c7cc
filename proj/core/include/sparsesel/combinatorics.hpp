#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sparsesel/types.hpp"

namespace sparsesel {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// C(n, k), saturating at kSaturated on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Saturating a * b and a + b.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b);

/// The k-subset of {0, ..., } with colexicographic rank `rank`
/// (combinatorial number system: rank = sum_i C(c_i, i + 1)).
std::vector<Index> unrank_colex(std::uint64_t rank, Index k);

/// Advance `c` (strictly increasing, values < n) to its colexicographic successor.
/// Returns false, leaving `c` unspecified, when `c` was the last subset.
bool next_colex(std::vector<Index>& c, Index n);

/// Visit the k-subsets of {0, ..., n-1} with colex ranks in [first, last).
/// fn receives (rank, const std::vector<Index>&).
template <typename Fn>
void for_each_colex(Index n, Index k, std::uint64_t first, std::uint64_t last, Fn&& fn) {
  if (first >= last) return;
  std::vector<Index> c = unrank_colex(first, k);
  for (std::uint64_t rank = first; rank < last; ++rank) {
    fn(rank, static_cast<const std::vector<Index>&>(c));
    if (rank + 1 < last && !next_colex(c, n)) break;
  }
}

}  // namespace sparsesel
