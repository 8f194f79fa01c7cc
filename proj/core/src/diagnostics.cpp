#include "sparsesel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsesel/combinatorics.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/linalg.hpp"
#include "sparsesel/rng.hpp"

namespace sparsesel {

namespace {

constexpr double kZeroSeparation = 1e-10;

// Family of size-s_hat supports missing at least t_min members of s_true:
// S = K ∪ F, K ⊂ S* with |K| = s - t, F ⊂ S*^c with |F| = s_hat - s + t.
class FalseSetFamily {
 public:
  FalseSetFamily(Index p, const SupportSet& s_true, Index s_hat, Index t_min)
      : s_true_(s_true), spurious_(s_true.complement(p)), s_hat_(s_hat) {
    const Index s = s_true.size();
    for (Index t = std::max<Index>(t_min, 1); t <= s; ++t) {
      const Index f = s_hat - s + t;
      if (f < 0 || f > spurious_.size()) continue;
      const std::uint64_t count = saturating_mul(
          binomial(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(s - t)),
          binomial(static_cast<std::uint64_t>(spurious_.size()), static_cast<std::uint64_t>(f)));
      layers_.push_back({t, count});
      total_ = saturating_add(total_, count);
    }
  }

  std::uint64_t size() const { return total_; }

  template <typename Fn>
  void enumerate(Fn&& fn) const {
    const Index s = s_true_.size();
    for (const auto& layer : layers_) {
      const Index kept = s - layer.missed;
      const Index extra = s_hat_ - kept;
      const std::uint64_t n_kept =
          binomial(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(kept));
      const std::uint64_t n_extra =
          binomial(static_cast<std::uint64_t>(spurious_.size()), static_cast<std::uint64_t>(extra));
      for_each_colex(s, kept, 0, n_kept, [&](std::uint64_t, const std::vector<Index>& k) {
        for_each_colex(spurious_.size(), extra, 0, n_extra,
                       [&](std::uint64_t, const std::vector<Index>& f) { fn(assemble(k, f)); });
      });
    }
  }

  SupportSet sample(RngStream& rng) const {
    std::uint64_t pick = static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(total_));
    const Layer* chosen = &layers_.back();
    for (const auto& layer : layers_) {
      if (pick < layer.count) {
        chosen = &layer;
        break;
      }
      pick -= layer.count;
    }
    const Index kept = s_true_.size() - chosen->missed;
    return assemble(rng.sample_subset(s_true_.size(), kept),
                    rng.sample_subset(spurious_.size(), s_hat_ - kept));
  }

 private:
  struct Layer {
    Index missed;
    std::uint64_t count;
  };

  SupportSet assemble(const std::vector<Index>& k, const std::vector<Index>& f) const {
    std::vector<Index> idx;
    idx.reserve(k.size() + f.size());
    for (Index i : k) idx.push_back(s_true_[i]);
    for (Index i : f) idx.push_back(spurious_[i]);
    return SupportSet::from_unordered(std::move(idx));
  }

  SupportSet s_true_;
  SupportSet spurious_;
  Index s_hat_;
  std::vector<Layer> layers_;
  std::uint64_t total_ = 0;
};

// Runs fn over the family, exhaustively or by sampling. Returns (exact, visited).
template <typename Fn>
std::pair<bool, std::uint64_t> visit_family(const FalseSetFamily& family,
                                            const EnumerationOptions& options, const char* who,
                                            Fn&& fn) {
  if (family.size() <= options.budget) {
    family.enumerate(fn);
    return {true, family.size()};
  }
  if (!options.allow_sampling) {
    throw BudgetExceededError(family.size(), options.budget,
                              std::string(who) + ": " + std::to_string(family.size()) +
                                  " candidate sets exceed budget " +
                                  std::to_string(options.budget));
  }
  RngStream rng(options.seed);
  const std::uint64_t draws = std::max<std::uint64_t>(options.budget, 1);
  for (std::uint64_t i = 0; i < draws; ++i) fn(family.sample(rng));
  return {false, draws};
}

SupportSet support_of(const Vector& beta) {
  const SupportSet s = SupportSet::nonzeros(beta);
  if (s.empty()) throw InvalidArgumentError("true coefficient vector has empty support");
  return s;
}

}  // namespace

SeparationReport tau_star(const Dataset& data, const Vector& beta_true, Index s_hat, double delta,
                          const EnumerationOptions& options) {
  if (beta_true.size() != data.p()) {
    throw InvalidArgumentError("tau_star: coefficient length differs from p");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgumentError("tau_star: delta outside [0, 1]");
  const SupportSet s_true = support_of(beta_true);
  const Index s = s_true.size();
  if (s_hat < 1 || s_hat > std::min(data.n(), data.p())) {
    throw InvalidArgumentError("tau_star: s_hat outside [1, min(n, p)]");
  }
  // Inclusive constraint |S0| >= delta * s; the 1e-12 guards exact products like 0.5 * 4.
  const auto t_min = static_cast<Index>(std::ceil(delta * static_cast<double>(s) - 1e-12));
  const FalseSetFamily family(data.p(), s_true, s_hat, t_min);

  SeparationReport out;
  out.tau_star = std::numeric_limits<double>::infinity();
  out.family_size = family.size();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  const auto [exact, visited] = visit_family(family, options, "tau_star", [&](const SupportSet& set) {
    const SupportSet missed = s_true.set_difference(set);
    const Index spurious = set.size() - set.intersection_size(s_true);
    if (spurious == 0) return;
    const Vector signal = select_columns(data.x(), missed) * select_entries(beta_true, missed);
    const double value =
        inv_n * projection_residual(data, set, signal).squaredNorm() / static_cast<double>(spurious);
    if (value < out.tau_star) {
      out.tau_star = value;
      out.achieving_set = set;
    }
  });
  out.exact = exact;
  out.subsets_examined = visited;
  return out;
}

LambdaMReport lambda_m(const Dataset& data, const SupportSet& s_true,
                       const EnumerationOptions& options) {
  if (s_true.empty() || s_true.bound() > data.p()) {
    throw InvalidArgumentError("lambda_m: true support empty or out of range");
  }
  const FalseSetFamily family(data.p(), s_true, s_true.size(), 1);
  LambdaMReport out;
  out.value = std::numeric_limits<double>::infinity();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  const auto [exact, visited] = visit_family(family, options, "lambda_m", [&](const SupportSet& set) {
    const SupportSet missed = s_true.set_difference(set);
    const Matrix resid = projection_residual(data, set, select_columns(data.x(), missed));
    const Matrix d = inv_n * resid.transpose() * resid;
    eig.compute(d, Eigen::EigenvaluesOnly);
    const double value = eig.eigenvalues()[0];
    if (value < out.value) {
      out.value = value;
      out.achieving_set = set;
    }
  });
  out.exact = exact;
  out.subsets_examined = visited;
  return out;
}

BetaMinThreshold beta_min_threshold(double lambda_m_value, Index n, Index p, double sigma,
                                    double xi, double eta) {
  if (!(eta >= 0.0 && eta < 1.0) || !(xi > 0.0) || p < 3 || n < 1 || sigma < 0.0) {
    throw InvalidArgumentError("beta_min_threshold: need 0 <= eta < 1, xi > 0, p >= 3, n >= 1, sigma >= 0");
  }
  if (!(lambda_m_value > kZeroSeparation)) {
    return {std::numeric_limits<double>::infinity(), false};
  }
  const double root = std::sqrt(std::log(static_cast<double>(p)) /
                                (static_cast<double>(n) * lambda_m_value));
  return {4.0 * xi * sigma / (1.0 - eta) * root, true};
}

TauSupReport tau_sup(const Dataset& data, const Vector& beta_true, Index j0) {
  if (beta_true.size() != data.p()) {
    throw InvalidArgumentError("tau_sup: coefficient length differs from p");
  }
  const SupportSet s_true = support_of(beta_true);
  if (!s_true.contains(j0)) {
    throw InvalidArgumentError("tau_sup: j0 = " + std::to_string(j0) + " is not in the true support");
  }
  const SupportSet spurious = s_true.complement(data.p());
  if (spurious.empty()) throw InvalidArgumentError("tau_sup: no spurious columns to swap in");
  const SupportSet rest = s_true.set_difference(SupportSet{j0});
  const double inv_n = 1.0 / static_cast<double>(data.n());
  const double b2 = beta_true[j0] * beta_true[j0];
  const Vector target = data.x().col(j0);

  TauSupReport out;
  out.value = -std::numeric_limits<double>::infinity();
  for (Index k : spurious) {
    const SupportSet set = rest.set_union(SupportSet{k});
    const double value = inv_n * projection_residual(data, set, target).squaredNorm() * b2;
    if (value > out.value) {
      out.value = value;
      out.achieving_set = set;
    }
  }
  return out;
}

double irrepresentable(const Dataset& data, const SupportSet& s_true, const Vector& signs) {
  if (s_true.empty() || s_true.bound() > data.p()) {
    throw InvalidArgumentError("irrepresentable: true support empty or out of range");
  }
  if (signs.size() != s_true.size()) {
    throw InvalidArgumentError("irrepresentable: sign vector length differs from |S*|");
  }
  const SupportSet rest = s_true.complement(data.p());
  if (rest.empty()) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(data.n());
  const Matrix xs = select_columns(data.x(), s_true);
  const Matrix sigma_ss = inv_n * xs.transpose() * xs;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma_ss, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularBlockError("irrepresentable: Sigma[S*,S*] is singular");
  }
  const Vector w = sigma_ss.ldlt().solve(signs);
  const Matrix cross = inv_n * select_columns(data.x(), rest).transpose() * xs;
  return (cross * w).cwiseAbs().maxCoeff();
}

KappaReport kappa(const Dataset& data, Index pi, Index l, Index s,
                  const EnumerationOptions& options) {
  if (pi < 1 || l < 1 || s < 1) throw InvalidArgumentError("kappa: pi, l, s must be positive");
  KappaReport out;
  out.upper_size = std::min(2 * pi + l, data.p());
  out.lower_size = std::min(2 * pi + s, data.p());
  const Matrix sigma = sample_covariance(data.x());
  auto run = [&](Index k, std::uint64_t seed) {
    const std::uint64_t count = binomial(static_cast<std::uint64_t>(data.p()), static_cast<std::uint64_t>(k));
    if (count > options.budget && !options.allow_sampling) {
      throw BudgetExceededError(count, options.budget, "kappa: restricted eigenvalue search exceeds budget");
    }
    return restricted_eigs(sigma, k, options.budget, seed);
  };
  const RestrictedEigenvalues up = run(out.upper_size, options.seed);
  const RestrictedEigenvalues low = run(out.lower_size, mix64(options.seed));
  out.upper = up.upper;
  out.lower = low.lower;
  out.exact = up.exact && low.exact;
  if (!(out.lower > 1e-12 * std::max(out.upper, 1.0))) {
    out.degenerate = true;
    out.kappa = std::numeric_limits<double>::infinity();
  } else {
    out.kappa = out.upper / out.lower;
  }
  return out;
}

}  // namespace sparsesel
