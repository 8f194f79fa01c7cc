#include "sparsesel/rng.hpp"

#include <algorithm>
#include <numeric>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace sparsesel {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

RngStream RngStream::split(std::uint64_t key) const {
  return RngStream(mix64(seed_ ^ mix64(key + 0x632be59bd9b4e019ULL)));
}

double RngStream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

double RngStream::uniform() {
  boost::random::uniform_01<double> dist;
  return dist(engine_);
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
  boost::random::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

Vector RngStream::normal_vector(Index size) {
  Vector out(size);
  for (Index i = 0; i < size; ++i) out[i] = normal();
  return out;
}

Matrix RngStream::normal_matrix(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = normal();
  }
  return out;
}

std::vector<Index> RngStream::permutation(Index n) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(uniform_index(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

std::vector<Index> RngStream::sample_subset(Index n, Index k) {
  // Partial Fisher-Yates over the first k slots.
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace sparsesel
