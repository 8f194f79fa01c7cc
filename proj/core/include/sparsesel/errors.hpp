#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sparsesel {

/// Raised when an argument violates a documented precondition.
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A design column with zero variance (or zero centered norm) cannot be standardized.
class DegenerateColumnError : public std::domain_error {
 public:
  DegenerateColumnError(Eigen::Index column, const std::string& what)
      : std::domain_error(what), column_(column) {}
  Eigen::Index column() const noexcept { return column_; }

 private:
  Eigen::Index column_;
};

/// More regressors than observations in a least-squares refit.
class OverParameterizedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A principal block of the sample covariance that must be inverted is singular.
class SingularBlockError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exhaustive enumeration would exceed the caller's subset budget.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(std::uint64_t required, std::uint64_t budget, const std::string& what)
      : std::runtime_error(what), required_(required), budget_(budget) {}
  /// Number of subsets the enumeration would need (saturates at UINT64_MAX).
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// Covariance matrix that is not symmetric positive semidefinite.
class InvalidCovarianceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sparsesel
