#include "sparsesel/bss.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "sparsesel/combinatorics.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sparsesel {

namespace {

// Near-minimal (rss, colex rank) pairs seen by one chunk of the enumeration.
struct ChunkBest {
  double min_rss = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::uint64_t>> near;

  void offer(double value, std::uint64_t rank, double tol) {
    if (value > min_rss + tol) return;
    near.emplace_back(value, rank);
    if (value < min_rss) {
      min_rss = value;
      if (near.size() > 64) prune(tol);
    }
  }

  void prune(double tol) {
    std::erase_if(near, [&](const auto& e) { return e.first > min_rss + tol; });
  }
};

double subset_rss(const Matrix& xc, const Vector& y, const std::vector<Index>& subset,
                  Matrix& work, double total) {
  const auto k = static_cast<Index>(subset.size());
  for (Index j = 0; j < k; ++j) work.col(j) = xc.col(subset[static_cast<std::size_t>(j)]);
  const Vector coef = least_squares(work, y);
  return std::clamp((y - work * coef).squaredNorm(), 0.0, total);
}

}  // namespace

BssResult best_subset_on_support(const Dataset& data, Index s_hat, const SupportSet& candidate,
                                 std::uint64_t budget) {
  const Index m = candidate.size();
  if (candidate.bound() > data.p()) {
    throw InvalidArgumentError("best_subset: candidate index out of range");
  }
  if (s_hat < 1 || s_hat > m || s_hat > data.n()) {
    throw InvalidArgumentError("best_subset: s_hat = " + std::to_string(s_hat) +
                               " outside [1, min(n, |candidate|)] = [1, " +
                               std::to_string(std::min(data.n(), m)) + "]");
  }
  const std::uint64_t total =
      binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(s_hat));
  if (total > budget) {
    throw BudgetExceededError(total, budget,
                              "best_subset: C(" + std::to_string(m) + ", " +
                                  std::to_string(s_hat) + ") = " + std::to_string(total) +
                                  " subsets exceeds budget " + std::to_string(budget));
  }

  const Matrix xc = select_columns(data.x(), candidate);
  const Vector& y = data.y();
  const double total_ss = y.squaredNorm();
  const double tol = kTieTolerance * total_ss;

  // Fixed chunking independent of the thread count keeps the reduction input identical.
  const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(total, 4096));
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  std::vector<ChunkBest> partial(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    Matrix work(data.n(), s_hat);
    ChunkBest& best = partial[static_cast<std::size_t>(c)];
    const std::uint64_t first = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t last = std::min(total, first + chunk);
    for_each_colex(m, s_hat, first, last, [&](std::uint64_t rank, const std::vector<Index>& s) {
      best.offer(subset_rss(xc, y, s, work, total_ss), rank, tol);
    });
  }

  double min_rss = std::numeric_limits<double>::infinity();
  for (const auto& p : partial) min_rss = std::min(min_rss, p.min_rss);
  std::vector<SupportSet> tied;
  for (const auto& p : partial) {
    for (const auto& [value, rank] : p.near) {
      if (value > min_rss + tol) continue;
      std::vector<Index> local = unrank_colex(rank, s_hat);
      for (auto& j : local) j = candidate[j];
      tied.emplace_back(std::move(local));
    }
  }
  std::sort(tied.begin(), tied.end());

  BssResult out;
  out.best = ols_fit(data, tied.front());
  out.tie_count = tied.size();
  out.subsets_examined = total;
  out.tied = std::move(tied);
  return out;
}

BssResult best_subset(const Dataset& data, Index s_hat, std::uint64_t budget) {
  if (s_hat < 1 || s_hat > std::min(data.n(), data.p())) {
    throw InvalidArgumentError("best_subset: s_hat = " + std::to_string(s_hat) +
                               " outside [1, min(n, p)]");
  }
  return best_subset_on_support(data, s_hat, SupportSet::range(data.p()), budget);
}

bool near_best_margin(const Dataset& data, const SupportSet& s, const SupportSet& s_truth,
                      double eta, double tau) {
  if (s == s_truth) return true;
  return rss(data, s) <= rss(data, s_truth) + static_cast<double>(data.n()) * eta * tau;
}

}  // namespace sparsesel
