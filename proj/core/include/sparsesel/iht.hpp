#pragma once

#include <cstdint>
#include <vector>

#include "sparsesel/bss.hpp"
#include "sparsesel/types.hpp"

namespace sparsesel {

/// Iterative hard thresholding with gradient expansion and OLS refits.
struct IhtConfig {
  Index pi = 1;      // projection size: support size retained after each iteration
  Index l = 1;       // expansion size: gradient coordinates recruited per iteration
  Index s_hat = 1;   // output model size
  double tol = 0.0;  // stop when ||beta_{t+1} - beta_t||_2 <= tol; <= 0 selects the default
  int max_iter = 500;

  /// 1e-8 * ||y||_2 / sqrt(n).
  static double default_tol(const Dataset& data);
  double resolved_tol(const Dataset& data) const;
  /// Throws InvalidArgumentError unless pi, l, s_hat, max_iter >= 1, pi + l <= n,
  /// pi <= p, l <= p and s_hat <= p.
  void validate(const Dataset& data) const;
};

struct IhtIteration {
  SupportSet expanded;   // S_t = supp(beta_t) ∪ G_t
  SupportSet projected;  // top-pi coefficients of the refit on S_t
  double loss = 0.0;     // L(beta_{t+1})
  double change = 0.0;   // ||beta_{t+1} - beta_t||_2
};

struct IhtTrace {
  std::vector<IhtIteration> iterations;
  bool converged = false;
};

/// Sum of squared residuals sum_i (x_i' beta - y_i)^2.
double loss(const Dataset& data, const Vector& beta);

/// 2 X'(X beta - y).
Vector gradient(const Dataset& data, const Vector& beta);

struct IhtStep {
  Vector beta_next;        // dense, length p
  SupportSet support_next; // S_t^dagger
  IhtIteration record;
};

/// One iteration from beta_t whose support is `support_t`.
IhtStep iht_step(const Dataset& data, const Vector& beta_t, const SupportSet& support_t,
                 const IhtConfig& config);
/// Same, with support_t = nonzeros of beta_t.
IhtStep iht_step(const Dataset& data, const Vector& beta_t, const IhtConfig& config);

struct IhtResult {
  Vector beta;            // final iterate, dense
  SupportSet support;     // support of the final iterate (size <= pi)
  Vector gradient;        // gradient at the final iterate
  SupportSet selected;    // the size-s_hat output model
  IhtTrace trace;
  bool converged() const noexcept { return trace.converged; }
};

/// Iterate from beta_0 = 0 until the change drops to tol or max_iter steps,
/// then size the model to s_hat (see iht_select).
IhtResult iht_run(const Dataset& data, const IhtConfig& config);

/// Final model of size s_hat from an iterate: the top min(s_hat, pi) coefficients
/// of beta, plus gradient coordinates in decreasing magnitude (skipping ones
/// already chosen) until s_hat indices are selected.
SupportSet iht_select(const Vector& beta, const Vector& grad, Index s_hat, Index pi);

/// iht_select for every s_hat in [1, s_max], sharing one sort of each vector.
std::vector<SupportSet> iht_selection_path(const Vector& beta, const Vector& grad, Index pi,
                                           Index s_max);

/// IHT followed by exhaustive best-s subset selection on supp(beta_iht).
BssResult two_stage(const Dataset& data, const IhtConfig& config, Index s,
                    std::uint64_t budget = kDefaultSubsetBudget);

struct IhtParameterAdvice {
  bool expansion_ok = false;   // l >= s
  bool projection_ok = false;  // pi >= 4 kappa^2 l
  double min_projection = 0.0; // 4 kappa^2 l
};

/// Checks the sufficient tuning rule l >= s, pi >= 4 kappa^2 l. Advisory only.
IhtParameterAdvice advise_iht_parameters(double kappa, Index pi, Index l, Index s);

}  // namespace sparsesel
