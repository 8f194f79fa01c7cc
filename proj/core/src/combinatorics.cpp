#include "sparsesel/combinatorics.hpp"

#include <algorithm>
#include <numeric>

namespace sparsesel {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; divide first via gcd to delay overflow.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t d = i / g;
    const std::uint64_t m = num / d;  // d divides num * r and gcd(r, d) == 1
    result = saturating_mul(r, m);
    if (result == kSaturated) return kSaturated;
  }
  return result;
}

std::vector<Index> unrank_colex(std::uint64_t rank, Index k) {
  std::vector<Index> c(static_cast<std::size_t>(k));
  for (Index i = k; i >= 1; --i) {
    // Largest v with C(v, i) <= rank.
    std::uint64_t v = static_cast<std::uint64_t>(i - 1);
    while (binomial(v + 1, static_cast<std::uint64_t>(i)) <= rank) ++v;
    c[static_cast<std::size_t>(i - 1)] = static_cast<Index>(v);
    rank -= binomial(v, static_cast<std::uint64_t>(i));
  }
  return c;
}

bool next_colex(std::vector<Index>& c, Index n) {
  const std::size_t k = c.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Index limit = (i + 1 < k) ? c[i + 1] : n;
    if (c[i] + 1 < limit) {
      ++c[i];
      for (std::size_t j = 0; j < i; ++j) c[j] = static_cast<Index>(j);
      return true;
    }
  }
  return false;
}

}  // namespace sparsesel
