#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sparsesel/types.hpp"

namespace sparsesel {

/// Seeded random stream with deterministic splitting.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard; the normal and uniform transforms come from Boost.Random, whose
/// algorithms do not vary between standard-library vendors. Child streams are
/// keyed by a SplitMix64 hash of (parent seed, key), so sub-streams are
/// independent of the order in which they are requested.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  /// Derived stream for `key`; does not consume from this stream.
  RngStream split(std::uint64_t key) const;

  double normal();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on {0, ..., bound - 1}.
  std::uint64_t uniform_index(std::uint64_t bound);

  Vector normal_vector(Index size);
  /// Filled row by row, so the first r rows do not depend on the total row count.
  Matrix normal_matrix(Index rows, Index cols);

  /// Fisher-Yates permutation of {0, ..., n - 1}.
  std::vector<Index> permutation(Index n);
  /// Uniformly random k-subset of {0, ..., n - 1}, sorted.
  std::vector<Index> sample_subset(Index n, Index k);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace sparsesel
