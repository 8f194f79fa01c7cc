#include "sparsesel/topk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparsesel/errors.hpp"

namespace sparsesel {

namespace {

// Strict weak order: larger magnitude first, then smaller index.
struct ByMagnitude {
  const Vector& v;
  bool operator()(Index a, Index b) const {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  }
};

}  // namespace

std::vector<Index> order_by_magnitude(const Vector& v) {
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), ByMagnitude{v});
  return order;
}

SupportSet topk_abs(const Vector& v, Index r) {
  if (r < 0 || r > v.size()) {
    throw InvalidArgumentError("topk_abs: r = " + std::to_string(r) + " outside [0, " +
                               std::to_string(v.size()) + "]");
  }
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + r, order.end(), ByMagnitude{v});
  order.resize(static_cast<std::size_t>(r));
  return SupportSet::from_unordered(std::move(order));
}

}  // namespace sparsesel
