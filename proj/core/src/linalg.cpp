#include "sparsesel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "sparsesel/combinatorics.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/rng.hpp"

namespace sparsesel {

namespace {

void check_size(const Dataset& data, const SupportSet& s, const char* who) {
  if (s.size() > data.n()) {
    throw OverParameterizedError(std::string(who) + ": support of size " +
                                 std::to_string(s.size()) + " exceeds n = " +
                                 std::to_string(data.n()));
  }
  if (s.bound() > data.p()) {
    throw InvalidArgumentError(std::string(who) + ": support index out of range");
  }
}

Eigen::CompleteOrthogonalDecomposition<Matrix> factor(const Matrix& a) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(a);
  return cod;
}

}  // namespace

Vector least_squares(const Matrix& a, const Vector& b) {
  if (a.cols() == 0) return Vector();
  return factor(a).solve(b);
}

FitResult ols_fit(const Dataset& data, const SupportSet& s) {
  check_size(data, s, "ols_fit");
  FitResult fit;
  fit.support = s;
  const double total = data.y().squaredNorm();
  if (s.empty()) {
    fit.rss = total;
    return fit;
  }
  const Matrix xs = select_columns(data.x(), s);
  fit.coefficients = least_squares(xs, data.y());
  fit.rss = std::clamp((data.y() - xs * fit.coefficients).squaredNorm(), 0.0, total);
  return fit;
}

double rss(const Dataset& data, const SupportSet& s) { return ols_fit(data, s).rss; }

Matrix projection_residual(const Dataset& data, const SupportSet& s, const Matrix& v) {
  check_size(data, s, "projection_residual");
  if (v.rows() != data.n()) {
    throw InvalidArgumentError("projection_residual: vector length differs from n");
  }
  if (s.empty()) return v;
  const Matrix xs = select_columns(data.x(), s);
  const auto cod = factor(xs);
  return v - xs * cod.solve(v);
}

Vector projection_residual(const Dataset& data, const SupportSet& s, const Vector& v) {
  return projection_residual(data, s, Matrix(v)).col(0);
}

Matrix sample_covariance(const Matrix& x) {
  Matrix sigma = Matrix::Zero(x.cols(), x.cols());
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / static_cast<double>(x.rows()));
  return sigma.selfadjointView<Eigen::Lower>();
}

Matrix principal_block(const Matrix& sigma, const SupportSet& rows, const SupportSet& cols) {
  Matrix out(rows.size(), cols.size());
  for (Index i = 0; i < rows.size(); ++i) {
    for (Index j = 0; j < cols.size(); ++j) out(i, j) = sigma(rows[i], cols[j]);
  }
  return out;
}

Matrix conditional_cov(const Dataset& data, const SupportSet& s_true, const SupportSet& s) {
  if (s_true.bound() > data.p() || s.bound() > data.p()) {
    throw InvalidArgumentError("conditional_cov: support index out of range");
  }
  const SupportSet missed = s_true.set_difference(s);
  if (missed.empty()) return Matrix(0, 0);
  const double inv_n = 1.0 / static_cast<double>(data.n());
  const Matrix x0 = select_columns(data.x(), missed);
  Matrix d = inv_n * x0.transpose() * x0;
  if (!s.empty()) {
    const Matrix xs = select_columns(data.x(), s);
    const Matrix sigma_ss = inv_n * xs.transpose() * xs;
    const Matrix sigma_s0 = inv_n * xs.transpose() * x0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma_ss, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
      throw SingularBlockError("conditional_cov: Sigma[S,S] is singular (condition number " +
                               (lo > 0.0 ? std::to_string(hi / lo) : std::string("inf")) + ")");
    }
    d -= sigma_s0.transpose() * sigma_ss.ldlt().solve(sigma_s0);
  }
  return 0.5 * (d + d.transpose());
}

RestrictedEigenvalues restricted_eigs(const Matrix& sigma_hat, Index k, std::uint64_t budget,
                                      std::uint64_t seed) {
  const Index p = sigma_hat.rows();
  if (sigma_hat.cols() != p) throw InvalidArgumentError("restricted_eigs: matrix not square");
  if (k < 1 || k > p) {
    throw InvalidArgumentError("restricted_eigs: k = " + std::to_string(k) + " outside [1, " +
                               std::to_string(p) + "]");
  }
  RestrictedEigenvalues out;
  out.upper = -std::numeric_limits<double>::infinity();
  out.lower = std::numeric_limits<double>::infinity();

  Matrix block(k, k);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
  auto visit = [&](const std::vector<Index>& subset) {
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) block(i, j) = sigma_hat(subset[i], subset[j]);
    }
    eig.compute(block, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()[0];
    const double hi = eig.eigenvalues()[k - 1];
    // Strict comparisons keep the first extremal subset in visiting order.
    if (hi > out.upper) {
      out.upper = hi;
      out.upper_set = SupportSet(subset);
    }
    if (lo < out.lower) {
      out.lower = lo;
      out.lower_set = SupportSet(subset);
    }
    ++out.subsets_examined;
  };

  const std::uint64_t total = binomial(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k));
  if (total <= budget) {
    out.exact = true;
    for_each_colex(p, k, 0, total, [&](std::uint64_t, const std::vector<Index>& c) { visit(c); });
  } else {
    out.exact = false;
    RngStream rng(seed);
    for (std::uint64_t draw = 0; draw < std::max<std::uint64_t>(budget, 1); ++draw) {
      visit(rng.sample_subset(p, k));
    }
  }
  return out;
}

RestrictedEigenvalues restricted_eigs(const Dataset& data, Index k, std::uint64_t budget,
                                      std::uint64_t seed) {
  return restricted_eigs(sample_covariance(data.x()), k, budget, seed);
}

}  // namespace sparsesel
