#pragma once

#include <string_view>

#include "sparsesel/types.hpp"

namespace sparsesel {

enum class StandardizeMode {
  /// Mean 0, sample standard deviation (n - 1 divisor) 1.
  zscore,
  /// Mean 0, unit Euclidean norm.
  unitnorm,
};

StandardizeMode parse_standardize_mode(std::string_view name);
std::string_view to_string(StandardizeMode mode);

/// Per-column affine map x -> (x - center) / scale, learned on one matrix and
/// reusable on another (e.g. a held-out split).
struct ColumnScaling {
  Vector center;
  Vector scale;

  /// Throws DegenerateColumnError naming the first constant column.
  static ColumnScaling fit(const Matrix& x, StandardizeMode mode);
  Matrix apply(const Matrix& x) const;
};

/// Standardize every column of x. Throws DegenerateColumnError on a constant column.
Matrix standardize_columns(const Matrix& x, StandardizeMode mode);

}  // namespace sparsesel
