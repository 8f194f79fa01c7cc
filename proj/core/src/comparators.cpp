#include "sparsesel/comparators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sparsesel/errors.hpp"
#include "sparsesel/metrics.hpp"
#include "sparsesel/rng.hpp"
#include "sparsesel/topk.hpp"

namespace sparsesel {

SupportSet sis(const Dataset& data, Index k) {
  if (k < 1 || k > data.p()) {
    throw InvalidArgumentError("sis: k = " + std::to_string(k) + " outside [1, p]");
  }
  return topk_abs(data.x().transpose() * data.y(), k);
}

std::vector<SupportSet> sis_path(const Dataset& data, Index k_max) {
  if (k_max < 0 || k_max > data.p()) throw InvalidArgumentError("sis_path: k_max outside [0, p]");
  const std::vector<Index> order = order_by_magnitude(data.x().transpose() * data.y());
  std::vector<SupportSet> path;
  std::vector<Index> current;
  for (Index k = 0; k < k_max; ++k) {
    current.push_back(order[static_cast<std::size_t>(k)]);
    path.push_back(SupportSet::from_unordered(current));
  }
  return path;
}

void PenaltySpec::validate() const {
  if (kind == PenaltyKind::scad && !(a > 2.0)) {
    throw InvalidArgumentError("PenaltySpec: SCAD requires a > 2, got " + std::to_string(a));
  }
}

double penalty_value(const PenaltySpec& spec, double lambda, double t) {
  t = std::abs(t);
  if (spec.kind == PenaltyKind::lasso || t <= lambda) return lambda * t;
  const double a = spec.a;
  if (t <= a * lambda) return (2.0 * a * lambda * t - t * t - lambda * lambda) / (2.0 * (a - 1.0));
  return lambda * lambda * (a + 1.0) / 2.0;
}

double coordinate_minimizer(const PenaltySpec& spec, double z, double v, double lambda) {
  const double az = std::abs(z);
  const double sign = z < 0.0 ? -1.0 : 1.0;
  if (spec.kind == PenaltyKind::lasso) return sign * std::max(az - lambda, 0.0) / v;

  const double a = spec.a;
  auto objective = [&](double b) { return 0.5 * v * b * b - az * b + penalty_value(spec, lambda, b); };
  std::array<double, 5> candidates{};
  std::size_t count = 0;
  candidates[count++] = 0.0;
  candidates[count++] = std::clamp((az - lambda) / v, 0.0, lambda);
  const double curvature = v * (a - 1.0) - 1.0;
  if (curvature > 0.0) {
    candidates[count++] = std::clamp((az * (a - 1.0) - a * lambda) / curvature, lambda, a * lambda);
  } else {
    candidates[count++] = lambda;
    candidates[count++] = a * lambda;
  }
  candidates[count++] = std::max(az / v, a * lambda);

  double best = 0.0;
  double best_value = objective(0.0);
  for (std::size_t i = 1; i < count; ++i) {
    const double value = objective(candidates[i]);
    if (value < best_value || (value == best_value && candidates[i] < best)) {
      best = candidates[i];
      best_value = value;
    }
  }
  return sign * best;
}

double lambda_max(const Dataset& data) {
  return (data.x().transpose() * data.y()).cwiseAbs().maxCoeff() / static_cast<double>(data.n());
}

std::vector<double> default_lambda_grid(const Dataset& data, Index count, double ratio) {
  if (count < 1 || !(ratio > 0.0 && ratio < 1.0)) {
    throw InvalidArgumentError("default_lambda_grid: need count >= 1 and ratio in (0, 1)");
  }
  const double top = lambda_max(data);
  if (!(top > 0.0)) throw InvalidArgumentError("default_lambda_grid: X'y is zero");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    grid[static_cast<std::size_t>(k)] = top * std::pow(ratio, frac);
  }
  return grid;
}

double penalized_objective(const Dataset& data, const PenaltySpec& spec, double lambda,
                           const Vector& beta) {
  double value = (data.y() - data.x() * beta).squaredNorm() / (2.0 * static_cast<double>(data.n()));
  for (Index j = 0; j < beta.size(); ++j) value += penalty_value(spec, lambda, beta[j]);
  return value;
}

namespace {

class CoordinateDescent {
 public:
  CoordinateDescent(const Dataset& data, const PenaltySpec& spec, const PathOptions& options)
      : x_(data.x()),
        spec_(spec),
        options_(options),
        inv_n_(1.0 / static_cast<double>(data.n())),
        col_sq_((x_.colwise().squaredNorm() * inv_n_).transpose()),
        beta_(Vector::Zero(x_.cols())),
        residual_(data.y()) {}

  // Minimizes at `lambda` starting from the current state. Returns (converged, sweeps).
  std::pair<bool, int> solve(double lambda) {
    int sweeps = 0;
    while (sweeps < options_.max_sweeps) {
      ++sweeps;
      if (sweep_all(lambda) <= options_.tol) return {true, sweeps};
      // Cycle on the active set until it settles, then re-check every coordinate.
      while (sweeps < options_.max_sweeps) {
        ++sweeps;
        if (sweep_active(lambda) <= options_.tol) break;
      }
    }
    return {false, sweeps};
  }

  const Vector& beta() const { return beta_; }

 private:
  double update(Index j, double lambda) {
    const double v = col_sq_[j];
    if (!(v > 0.0)) return 0.0;
    const double old = beta_[j];
    const double z = inv_n_ * x_.col(j).dot(residual_) + v * old;
    const double fresh = coordinate_minimizer(spec_, z, v, lambda);
    if (fresh != old) {
      residual_ -= (fresh - old) * x_.col(j);
      beta_[j] = fresh;
    }
    return std::abs(fresh - old);
  }

  double sweep_all(double lambda) {
    double change = 0.0;
    for (Index j = 0; j < x_.cols(); ++j) change = std::max(change, update(j, lambda));
    return change;
  }

  double sweep_active(double lambda) {
    double change = 0.0;
    for (Index j = 0; j < x_.cols(); ++j) {
      if (beta_[j] != 0.0) change = std::max(change, update(j, lambda));
    }
    return change;
  }

  const Matrix& x_;
  PenaltySpec spec_;
  PathOptions options_;
  double inv_n_;
  Vector col_sq_;
  Vector beta_;
  Vector residual_;
};

}  // namespace

SelectionPath penalized_path(const Dataset& data, const PenaltySpec& spec,
                             std::span<const double> lambdas, const PathOptions& options) {
  spec.validate();
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0) || (k > 0 && !(lambdas[k] < lambdas[k - 1]))) {
      throw InvalidArgumentError("penalized_path: lambda grid must be positive and strictly decreasing");
    }
  }
  CoordinateDescent solver(data, spec, options);
  SelectionPath path;
  path.entries.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const auto [converged, sweeps] = solver.solve(lambda);
    PathEntry entry;
    entry.lambda = lambda;
    entry.coefficients = solver.beta();
    entry.support = SupportSet::nonzeros(entry.coefficients);
    entry.converged = converged;
    entry.sweeps = sweeps;
    path.entries.push_back(std::move(entry));
  }
  return path;
}

std::vector<std::vector<Index>> fold_assignment(Index n, Index folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgumentError("cross-validation needs at least 2 folds");
  if (n < folds) {
    throw InvalidArgumentError("cross-validation: " + std::to_string(folds) +
                               " folds would leave a fold empty with n = " + std::to_string(n));
  }
  RngStream rng(seed);
  const std::vector<Index> perm = rng.permutation(n);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  for (Index i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i % folds)].push_back(perm[static_cast<std::size_t>(i)]);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

CvResult cross_validate(const Dataset& data, const PenaltySpec& spec,
                        std::span<const double> lambdas, Index folds, std::uint64_t seed,
                        const PathOptions& options) {
  if (lambdas.empty()) throw InvalidArgumentError("cross_validate: empty lambda grid");
  const auto assignment = fold_assignment(data.n(), folds, seed);
  std::vector<double> sse(lambdas.size(), 0.0);
  for (const auto& held_out : assignment) {
    std::vector<Index> train;
    train.reserve(static_cast<std::size_t>(data.n()) - held_out.size());
    for (Index i = 0, h = 0; i < data.n(); ++i) {
      if (h < static_cast<Index>(held_out.size()) && held_out[static_cast<std::size_t>(h)] == i) {
        ++h;
      } else {
        train.push_back(i);
      }
    }
    const Dataset fit_data(select_rows(data.x(), train), select_rows(data.y(), train));
    const Matrix x_test = select_rows(data.x(), held_out);
    const Vector y_test = select_rows(data.y(), held_out);
    const SelectionPath path = penalized_path(fit_data, spec, lambdas, options);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      sse[k] += (y_test - x_test * path.entries[k].coefficients).squaredNorm();
    }
  }
  CvResult out;
  out.cv_error.resize(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    out.cv_error[k] = sse[k] / static_cast<double>(data.n());
  }
  const double best = *std::min_element(out.cv_error.begin(), out.cv_error.end());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (out.cv_error[k] <= best * (1.0 + 1e-12)) {
      out.lambda_index = static_cast<Index>(k);
      out.lambda_star = lambdas[k];
      break;
    }
  }
  return out;
}

std::vector<SelectionMetrics> tpr_fdr_curve(const SelectionPath& path, const SupportSet& truth) {
  if (truth.empty()) throw InvalidArgumentError("tpr_fdr_curve: true support is empty");
  std::vector<SelectionMetrics> out;
  out.reserve(path.entries.size());
  for (const auto& e : path.entries) out.push_back(selection_metrics(e.support, truth));
  return out;
}

}  // namespace sparsesel
