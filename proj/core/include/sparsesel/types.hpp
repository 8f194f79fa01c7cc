#pragma once

#include <compare>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sparsesel {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted set of distinct column indices (0-based). Represents a candidate model.
class SupportSet {
 public:
  SupportSet() = default;
  /// Indices must be strictly increasing and nonnegative; throws InvalidArgumentError otherwise.
  explicit SupportSet(std::vector<Index> indices);
  SupportSet(std::initializer_list<Index> indices);

  /// Sorts and deduplicates arbitrary indices.
  static SupportSet from_unordered(std::vector<Index> indices);
  /// {0, 1, ..., count - 1}
  static SupportSet range(Index count);
  /// Indices j with v_j != 0.
  static SupportSet nonzeros(const Vector& v);

  Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  std::span<const Index> indices() const noexcept { return indices_; }
  const std::vector<Index>& vector() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  Index operator[](Index i) const { return indices_[static_cast<std::size_t>(i)]; }
  /// Largest index plus one, 0 for the empty set.
  Index bound() const noexcept { return indices_.empty() ? 0 : indices_.back() + 1; }

  bool contains(Index j) const;
  bool is_subset_of(const SupportSet& other) const;
  Index intersection_size(const SupportSet& other) const;
  SupportSet set_union(const SupportSet& other) const;
  SupportSet set_difference(const SupportSet& other) const;
  SupportSet set_intersection(const SupportSet& other) const;
  /// [0, p) minus this set.
  SupportSet complement(Index p) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  /// Lexicographic order on the sorted index sequences.
  friend std::strong_ordering operator<=>(const SupportSet& a, const SupportSet& b) {
    return a.indices_ <=> b.indices_;
  }

 private:
  std::vector<Index> indices_;
};

/// Design matrix (n x p) and response (n). The experimental unit.
class Dataset {
 public:
  /// Throws InvalidArgumentError on empty or mismatched dimensions or non-finite entries.
  Dataset(Matrix x, Vector y);

  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  Index n() const noexcept { return x_.rows(); }
  Index p() const noexcept { return x_.cols(); }
  /// Same response, different design (dimensions re-validated).
  Dataset with_design(Matrix x) const { return Dataset(std::move(x), y_); }
  Dataset with_response(Vector y) const { return Dataset(x_, std::move(y)); }

 private:
  Matrix x_;
  Vector y_;
};

/// Least-squares fit restricted to a support.
struct FitResult {
  SupportSet support;
  Vector coefficients;  // aligned with support
  double rss = 0.0;

  /// Coefficients scattered into a length-p vector.
  Vector dense(Index p) const;
};

struct SelectionMetrics {
  double tpr = 0.0;
  double fdr = 0.0;
};

/// Extract the columns of x listed in s.
Matrix select_columns(const Matrix& x, const SupportSet& s);
/// Extract the entries of v listed in s.
Vector select_entries(const Vector& v, const SupportSet& s);
/// Extract the rows listed in rows.
Matrix select_rows(const Matrix& x, std::span<const Index> rows);
Vector select_rows(const Vector& v, std::span<const Index> rows);

}  // namespace sparsesel
