#pragma once

#include <vector>

#include "sparsesel/types.hpp"

namespace sparsesel {

/// Indices ordered by decreasing |v_j|; equal magnitudes keep the smaller index first.
std::vector<Index> order_by_magnitude(const Vector& v);

/// The r indices with the largest |v_j|, ties broken by smaller index.
/// Throws InvalidArgumentError when r > v.size() or r < 0.
SupportSet topk_abs(const Vector& v, Index r);

}  // namespace sparsesel
