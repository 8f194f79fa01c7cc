#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsesel/app/config.hpp"
#include "sparsesel/app/output.hpp"
#include "sparsesel/types.hpp"

namespace sparsesel::app {

/// Model supports of sizes 1, 2, ... produced by a size-indexed method
/// (iht, two_stage, bss, sis). The list can stop short of `max_size` when an
/// exhaustive search would exceed `budget`.
std::vector<SupportSet> supports_by_size(const MethodSpec& method, const Dataset& data, Index max_size,
                                         std::uint64_t budget);

/// Applies the configured scaling to a design (no-op for Scaling::none).
Matrix scale_design(const Matrix& x, Scaling scaling);

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct CurvePoint {
  double parameter = 0.0;  // s_hat, or the mean lambda at this grid index
  double fdr = 0.0;
  double tpr = 0.0;
  Index replicates_used = 0;
};

struct MethodCurve {
  MethodSpec method;
  std::vector<CurvePoint> points;
  std::optional<CurvePoint> cv_point;  // penalized methods only
  Index replicates_ok = 0;
  std::vector<std::string> failures;   // "replicate r: message"
};

struct SimulateResult {
  std::vector<MethodCurve> curves;
};

/// Runs every method on every replicate, averages (FDR, TPR) per grid index and
/// writes curve_<label>.csv, cvpoint_<label>.csv, simulate.json and run.log to
/// config.out_dir.
SimulateResult run_simulate(const ExperimentConfig& config, RunLog& log);

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct RankedFeature {
  std::string name;
  double coefficient = 0.0;
  double t_statistic = 0.0;  // nan when the refit has no residual degrees of freedom
};

struct FitReport {
  MethodSpec method;
  bool ok = false;
  std::string error;
  double tuning = 0.0;  // chosen s_hat or lambda
  Index model_size = 0;
  double test_r2 = 0.0;
  std::vector<RankedFeature> ranked;
  Index refit_k = 0;
  double refit_test_r2 = 0.0;
  Index noise_selected = 0;
};

struct FitResultSet {
  Index rows_used = 0;
  std::size_t rows_rejected = 0;
  Index n_train = 0;
  Index n_test = 0;
  std::vector<FitReport> methods;
};

/// Seeded train/test split, CV tuning on the training part, test-set R^2 and
/// feature ranking for each method. Writes fit.json and run.log.
FitResultSet run_fit(const ExperimentConfig& config, RunLog& log);

/// The same pipeline on an in-memory regression (used by run_fit).
FitResultSet fit_regression(const ExperimentConfig& config, std::vector<std::string> feature_names,
                            const Matrix& x, const Vector& y, RunLog& log);

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

/// Design diagnostics for a CSV with a given true support, or for replicate 0 of
/// the configured simulation. Writes diagnose.json and run.log; returns the report.
Json run_diagnose(const ExperimentConfig& config, RunLog& log);

}  // namespace sparsesel::app
