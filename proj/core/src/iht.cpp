#include "sparsesel/iht.hpp"

#include <cmath>
#include <string>

#include "sparsesel/errors.hpp"
#include "sparsesel/linalg.hpp"
#include "sparsesel/topk.hpp"

namespace sparsesel {

double IhtConfig::default_tol(const Dataset& data) {
  return 1e-8 * data.y().norm() / std::sqrt(static_cast<double>(data.n()));
}

double IhtConfig::resolved_tol(const Dataset& data) const {
  return tol > 0.0 ? tol : default_tol(data);
}

void IhtConfig::validate(const Dataset& data) const {
  auto fail = [](const std::string& msg) { throw InvalidArgumentError("IhtConfig: " + msg); };
  if (pi < 1 || l < 1 || s_hat < 1 || max_iter < 1) {
    fail("pi, l, s_hat and max_iter must be at least 1");
  }
  if (pi + l > data.n()) {
    fail("pi + l = " + std::to_string(pi + l) + " exceeds n = " + std::to_string(data.n()));
  }
  if (pi > data.p() || l > data.p() || s_hat > data.p()) {
    fail("pi, l and s_hat must not exceed p = " + std::to_string(data.p()));
  }
}

double loss(const Dataset& data, const Vector& beta) {
  return (data.x() * beta - data.y()).squaredNorm();
}

Vector gradient(const Dataset& data, const Vector& beta) {
  return 2.0 * (data.x().transpose() * (data.x() * beta - data.y()));
}

IhtStep iht_step(const Dataset& data, const Vector& beta_t, const SupportSet& support_t,
                 const IhtConfig& config) {
  if (support_t.size() > config.pi) {
    throw InvalidArgumentError("iht_step: current support larger than pi");
  }
  const SupportSet grown = topk_abs(gradient(data, beta_t), config.l);
  const SupportSet expanded = support_t.set_union(grown);
  const FitResult refit = ols_fit(data, expanded);

  const Index keep = std::min(config.pi, expanded.size());
  const SupportSet top_local = topk_abs(refit.coefficients, keep);
  std::vector<Index> projected_idx;
  projected_idx.reserve(static_cast<std::size_t>(keep));
  for (Index k : top_local) projected_idx.push_back(expanded[k]);
  const SupportSet projected(std::move(projected_idx));

  const FitResult next = ols_fit(data, projected);
  IhtStep step;
  step.beta_next = next.dense(data.p());
  step.support_next = projected;
  step.record.expanded = expanded;
  step.record.projected = projected;
  step.record.loss = next.rss;
  step.record.change = (step.beta_next - beta_t).norm();
  return step;
}

IhtStep iht_step(const Dataset& data, const Vector& beta_t, const IhtConfig& config) {
  return iht_step(data, beta_t, SupportSet::nonzeros(beta_t), config);
}

SupportSet iht_select(const Vector& beta, const Vector& grad, Index s_hat, Index pi) {
  if (s_hat < 0 || s_hat > beta.size()) {
    throw InvalidArgumentError("iht_select: s_hat outside [0, p]");
  }
  SupportSet chosen = topk_abs(beta, std::min(s_hat, pi));
  if (s_hat <= pi) return chosen;
  // Gradient part; overlapping coordinates are skipped so the model reaches s_hat.
  std::vector<Index> extra;
  for (Index j : order_by_magnitude(grad)) {
    if (chosen.size() + static_cast<Index>(extra.size()) >= s_hat) break;
    if (!chosen.contains(j)) extra.push_back(j);
  }
  return chosen.set_union(SupportSet::from_unordered(std::move(extra)));
}

std::vector<SupportSet> iht_selection_path(const Vector& beta, const Vector& grad, Index pi,
                                           Index s_max) {
  const Index p = beta.size();
  if (s_max < 0 || s_max > p) throw InvalidArgumentError("iht_selection_path: s_max outside [0, p]");
  std::vector<SupportSet> path;
  path.reserve(static_cast<std::size_t>(s_max));
  const std::vector<Index> by_beta = order_by_magnitude(beta);
  std::vector<Index> current;
  for (Index s = 1; s <= std::min(s_max, pi); ++s) {
    current.push_back(by_beta[static_cast<std::size_t>(s - 1)]);
    path.push_back(SupportSet::from_unordered(current));
  }
  if (s_max > pi) {
    const SupportSet base = SupportSet::from_unordered(
        std::vector<Index>(by_beta.begin(), by_beta.begin() + std::min(pi, p)));
    auto next = std::vector<Index>(base.begin(), base.end());
    const std::vector<Index> by_grad = order_by_magnitude(grad);
    auto it = by_grad.begin();
    for (Index s = pi + 1; s <= s_max; ++s) {
      while (base.contains(*it)) ++it;
      next.push_back(*it++);
      path.push_back(SupportSet::from_unordered(next));
    }
  }
  return path;
}

IhtResult iht_run(const Dataset& data, const IhtConfig& config) {
  config.validate(data);
  const double tol = config.resolved_tol(data);
  IhtResult out;
  out.beta = Vector::Zero(data.p());
  for (int t = 0; t < config.max_iter; ++t) {
    IhtStep step = iht_step(data, out.beta, out.support, config);
    out.beta = std::move(step.beta_next);
    out.support = std::move(step.support_next);
    const double change = step.record.change;
    out.trace.iterations.push_back(std::move(step.record));
    if (change <= tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.gradient = gradient(data, out.beta);
  out.selected = iht_select(out.beta, out.gradient, config.s_hat, config.pi);
  return out;
}

BssResult two_stage(const Dataset& data, const IhtConfig& config, Index s, std::uint64_t budget) {
  const IhtResult iht = iht_run(data, config);
  return best_subset_on_support(data, s, iht.support, budget);
}

IhtParameterAdvice advise_iht_parameters(double kappa, Index pi, Index l, Index s) {
  IhtParameterAdvice advice;
  advice.expansion_ok = l >= s;
  advice.min_projection = 4.0 * kappa * kappa * static_cast<double>(l);
  advice.projection_ok = static_cast<double>(pi) >= advice.min_projection;
  return advice;
}

}  // namespace sparsesel
