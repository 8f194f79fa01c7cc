#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>

#include "sparsesel/app/commands.hpp"
#include "sparsesel/app/table.hpp"
#include "sparsesel/comparators.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/linalg.hpp"
#include "sparsesel/rng.hpp"
#include "sparsesel/simgen.hpp"

namespace sparsesel::app {

namespace {

constexpr std::uint64_t kSplitStream = 0x5B1;
constexpr std::uint64_t kAugmentStream = 0xA06;
constexpr std::uint64_t kFitCvStream = 0xCF;

double r_squared(const Vector& y, const Vector& prediction) {
  const double sse = (y - prediction).squaredNorm();
  const double sst = (y.array() - y.mean()).matrix().squaredNorm();
  return sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity());
}

/// Rows of x/y listed in `rows`.
Dataset subset_rows(const Matrix& x, const Vector& y, const std::vector<Index>& rows) {
  return Dataset(select_rows(x, rows), select_rows(y, rows));
}

/// Out-of-sample predictions from an OLS refit on `support` (intercept handled by centering).
Vector refit_predict(const Dataset& train, const SupportSet& support, const Matrix& x_test) {
  if (support.empty()) return Vector::Zero(x_test.rows());
  const FitResult fit = ols_fit(train, support);
  return select_columns(x_test, support) * fit.coefficients;
}

/// Orders a support by |t| of its OLS refit on the training data (ties by index).
std::vector<RankedFeature> rank_support(const Dataset& train, const SupportSet& support,
                                        const std::vector<std::string>& names) {
  std::vector<RankedFeature> out;
  if (support.empty()) return out;
  const FitResult fit = ols_fit(train, support);
  const Index k = support.size();
  const double dof = static_cast<double>(train.n() - k - 1);
  Vector t = Vector::Constant(k, std::numeric_limits<double>::quiet_NaN());
  if (dof > 0.0) {
    const Matrix xs = select_columns(train.x(), support);
    const Eigen::LDLT<Matrix> ldlt(xs.transpose() * xs);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Matrix inv = ldlt.solve(Matrix::Identity(k, k));
      const double sigma2 = fit.rss / dof;
      for (Index j = 0; j < k; ++j) {
        const double se = std::sqrt(std::max(sigma2 * inv(j, j), 0.0));
        if (se > 0.0) t[j] = fit.coefficients[j] / se;
      }
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  const bool have_t = t.allFinite();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return have_t ? std::abs(t[a]) > std::abs(t[b]) : std::abs(fit.coefficients[a]) > std::abs(fit.coefficients[b]);
  });
  for (Index j : order) {
    out.push_back({names[static_cast<std::size_t>(support[j])], fit.coefficients[j], t[j]});
  }
  return out;
}

struct Tuned {
  double tuning = 0.0;
  SupportSet support;
  Vector prediction;  // on the test design
};

Tuned tune_penalized(const MethodSpec& method, const Dataset& train, const Matrix& x_test,
                     const ExperimentConfig& config, std::uint64_t cv_seed) {
  const PenaltySpec spec = method.kind == MethodSpec::Kind::lasso ? PenaltySpec::lasso() : PenaltySpec::scad(method.a);
  const auto grid = default_lambda_grid(train, method.lambda_count, method.lambda_ratio);
  const CvResult cv = cross_validate(train, spec, grid, config.cv_folds, cv_seed);
  const auto prefix = std::span(grid).first(static_cast<std::size_t>(cv.lambda_index) + 1);
  const PathEntry entry = penalized_path(train, spec, prefix).entries.back();
  return {cv.lambda_star, entry.support, x_test * entry.coefficients};
}

Tuned tune_size(const MethodSpec& method, const Dataset& train, const Matrix& x_test,
                const ExperimentConfig& config, std::uint64_t cv_seed) {
  const auto folds = fold_assignment(train.n(), config.cv_folds, cv_seed);
  Index smallest_fold_train = train.n();
  for (const auto& f : folds) smallest_fold_train = std::min(smallest_fold_train, train.n() - static_cast<Index>(f.size()));
  Index cap = std::min(train.p(), smallest_fold_train - 2);
  if (method.max_size > 0) cap = std::min(cap, method.max_size);
  if (cap < 1) throw InvalidArgumentError("fit: too few training rows for size tuning");

  std::vector<double> sse(static_cast<std::size_t>(cap), 0.0);
  std::size_t usable = static_cast<std::size_t>(cap);
  for (const auto& held : folds) {
    std::vector<Index> fit_rows;
    std::vector<bool> is_held(static_cast<std::size_t>(train.n()), false);
    for (Index i : held) is_held[static_cast<std::size_t>(i)] = true;
    for (Index i = 0; i < train.n(); ++i)
      if (!is_held[static_cast<std::size_t>(i)]) fit_rows.push_back(i);
    const Dataset fold_train = subset_rows(train.x(), train.y(), fit_rows);
    const Matrix x_held = select_rows(train.x(), held);
    const Vector y_held = select_rows(train.y(), held);
    const auto supports = supports_by_size(method, fold_train, cap, config.budget);
    usable = std::min(usable, supports.size());
    for (std::size_t k = 0; k < usable; ++k) {
      sse[k] += (y_held - refit_predict(fold_train, supports[k], x_held)).squaredNorm();
    }
  }
  if (usable == 0) throw InvalidArgumentError("fit: method produced no candidate models");
  std::size_t best = 0;
  for (std::size_t k = 1; k < usable; ++k) {
    if (sse[k] < sse[best] * (1.0 - 1e-12)) best = k;
  }
  const auto supports = supports_by_size(method, train, static_cast<Index>(best + 1), config.budget);
  if (supports.size() <= best) throw InvalidArgumentError("fit: tuned model size unavailable on full training set");
  const SupportSet& chosen = supports[best];
  return {static_cast<double>(best + 1), chosen, refit_predict(train, chosen, x_test)};
}

Json report_json(const FitReport& r) {
  Json out;
  out["label"] = r.method.label;
  out["method"] = to_string(r.method.kind);
  out["ok"] = r.ok;
  if (!r.ok) {
    out["error"] = r.error;
    return out;
  }
  out[r.method.penalized() ? "lambda" : "s_hat"] = json_number(r.tuning);
  out["model_size"] = r.model_size;
  out["test_r2"] = json_number(r.test_r2);
  Json features = Json::array();
  for (const auto& f : r.ranked) {
    features.push_back({{"name", f.name}, {"coefficient", json_number(f.coefficient)}, {"t", json_number(f.t_statistic)}});
  }
  out["selected"] = std::move(features);
  out["refit_top_k"] = {{"k", r.refit_k}, {"test_r2", json_number(r.refit_test_r2)}};
  out["noise_selected"] = r.noise_selected;
  return out;
}

}  // namespace

FitResultSet fit_regression(const ExperimentConfig& config, std::vector<std::string> feature_names,
                            const Matrix& x_in, const Vector& y_in, RunLog& log) {
  const RngStream root(config.seed);
  Matrix x = x_in;
  const Index p_original = x.cols();
  if (config.fit.augment_noise > 0) {
    RngStream stream = root.split(kAugmentStream);
    x = augment_noise(Dataset(x, y_in), config.fit.augment_noise, stream).x();
    for (Index k = 1; k <= config.fit.augment_noise; ++k) feature_names.push_back("noise_" + std::to_string(k));
  }
  const Index n = x.rows();
  if (n < 4) throw InvalidArgumentError("fit: need at least 4 complete rows");
  RngStream split_stream = root.split(kSplitStream);
  const std::vector<Index> perm = split_stream.permutation(n);
  const auto n_test = std::clamp<Index>(static_cast<Index>(std::llround(config.fit.test_fraction * static_cast<double>(n))),
                                        1, n - 2);
  std::vector<Index> test_rows(perm.begin(), perm.begin() + n_test);
  std::vector<Index> train_rows(perm.begin() + n_test, perm.end());
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());

  Matrix x_train = select_rows(x, train_rows);
  Matrix x_test = select_rows(x, test_rows);
  const Scaling scaling = config.scaling.value_or(Scaling::zscore);
  if (scaling != Scaling::none) {
    const ColumnScaling cs = ColumnScaling::fit(
        x_train, scaling == Scaling::zscore ? StandardizeMode::zscore : StandardizeMode::unitnorm);
    x_train = cs.apply(x_train);
    x_test = cs.apply(x_test);
  }
  const Vector y_train_raw = select_rows(y_in, train_rows);
  const Vector y_test = select_rows(y_in, test_rows);
  const double y_center = y_train_raw.mean();
  const Dataset train(x_train, (y_train_raw.array() - y_center).matrix());

  FitResultSet result;
  result.n_train = train.n();
  result.n_test = n_test;
  log.add("split: train=" + std::to_string(result.n_train) + " test=" + std::to_string(result.n_test) +
          " features=" + std::to_string(x.cols()) + " standardize=" + to_string(scaling));
  const RngStream cv_root = root.split(kFitCvStream);
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const MethodSpec& method = config.methods[m];
    FitReport report;
    report.method = method;
    try {
      const Tuned tuned = method.penalized() ? tune_penalized(method, train, x_test, config, cv_root.split(m).seed())
                                             : tune_size(method, train, x_test, config, cv_root.split(m).seed());
      report.tuning = tuned.tuning;
      report.model_size = tuned.support.size();
      report.test_r2 = r_squared(y_test, (tuned.prediction.array() + y_center).matrix());
      report.ranked = rank_support(train, tuned.support, feature_names);
      report.refit_k = std::min<Index>(config.fit.refit_top_k, tuned.support.size());
      if (report.refit_k > 0) {
        std::vector<Index> top;
        for (Index k = 0; k < report.refit_k; ++k) {
          const auto& name = report.ranked[static_cast<std::size_t>(k)].name;
          top.push_back(static_cast<Index>(std::find(feature_names.begin(), feature_names.end(), name) -
                                           feature_names.begin()));
        }
        const SupportSet top_set = SupportSet::from_unordered(top);
        report.refit_test_r2 = r_squared(y_test, (refit_predict(train, top_set, x_test).array() + y_center).matrix());
      }
      for (Index j : tuned.support) report.noise_selected += j >= p_original ? 1 : 0;
      report.ok = true;
      log.add("method " + method.label + ": size=" + std::to_string(report.model_size) +
              " test_r2=" + format_number(report.test_r2));
    } catch (const std::exception& e) {
      report.error = e.what();
      log.add("method " + method.label + ": failed: " + report.error);
    }
    result.methods.push_back(std::move(report));
  }
  return result;
}

FitResultSet run_fit(const ExperimentConfig& config, RunLog& log) {
  config.validate();
  if (!config.input) throw InvalidArgumentError("fit: the config needs an 'input' section");
  if (config.methods.empty()) throw InvalidArgumentError("fit: at least one method is required");
  log.add("command: fit");
  log.add("seed: " + std::to_string(config.seed));
  const Table table = read_csv(config.input->path);
  const Regression reg = split_response(table, config.input->response);
  log.add("input: rows=" + std::to_string(reg.x.rows()) + " rejected_rows=" + std::to_string(table.rows_rejected));
  FitResultSet result = fit_regression(config, reg.feature_names, reg.x, reg.y, log);
  result.rows_used = reg.x.rows();
  result.rows_rejected = table.rows_rejected;

  Json report;
  report["command"] = "fit";
  report["seed"] = config.seed;
  report["config"] = to_json(config);
  report["rows_used"] = result.rows_used;
  report["rows_rejected"] = result.rows_rejected;
  report["n_train"] = result.n_train;
  report["n_test"] = result.n_test;
  report["methods"] = Json::array();
  for (const auto& m : result.methods) report["methods"].push_back(report_json(m));
  write_file(config.out_dir / "fit.json", report.dump(2) + "\n");
  log.save(config.out_dir / "run.log");
  return result;
}

}  // namespace sparsesel::app
