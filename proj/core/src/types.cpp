#include "sparsesel/types.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "sparsesel/errors.hpp"

namespace sparsesel {

SupportSet::SupportSet(std::vector<Index> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) {
      throw InvalidArgumentError("SupportSet: negative index " + std::to_string(indices_[i]));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw InvalidArgumentError("SupportSet: indices must be strictly increasing");
    }
  }
}

SupportSet::SupportSet(std::initializer_list<Index> indices)
    : SupportSet(std::vector<Index>(indices)) {}

SupportSet SupportSet::from_unordered(std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return SupportSet(std::move(indices));
}

SupportSet SupportSet::range(Index count) {
  std::vector<Index> idx(static_cast<std::size_t>(std::max<Index>(count, 0)));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Index>(i);
  SupportSet s;
  s.indices_ = std::move(idx);
  return s;
}

SupportSet SupportSet::nonzeros(const Vector& v) {
  SupportSet s;
  for (Index j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) s.indices_.push_back(j);
  }
  return s;
}

bool SupportSet::contains(Index j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

Index SupportSet::intersection_size(const SupportSet& other) const {
  Index count = 0;
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

SupportSet SupportSet::set_union(const SupportSet& other) const {
  SupportSet out;
  out.indices_.reserve(indices_.size() + other.indices_.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out.indices_));
  return out;
}

SupportSet SupportSet::set_difference(const SupportSet& other) const {
  SupportSet out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

SupportSet SupportSet::set_intersection(const SupportSet& other) const {
  SupportSet out;
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                        other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

SupportSet SupportSet::complement(Index p) const {
  return SupportSet::range(p).set_difference(*this);
}

Dataset::Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw InvalidArgumentError("Dataset: design must have at least one row and one column");
  }
  if (x_.rows() != y_.size()) {
    throw InvalidArgumentError("Dataset: design has " + std::to_string(x_.rows()) +
                               " rows but response has " + std::to_string(y_.size()) +
                               " entries");
  }
  if (!x_.allFinite() || !y_.allFinite()) {
    throw InvalidArgumentError("Dataset: non-finite entry in design or response");
  }
}

Vector FitResult::dense(Index p) const {
  Vector out = Vector::Zero(p);
  for (Index k = 0; k < support.size(); ++k) out[support[k]] = coefficients[k];
  return out;
}

Matrix select_columns(const Matrix& x, const SupportSet& s) {
  Matrix out(x.rows(), s.size());
  for (Index k = 0; k < s.size(); ++k) out.col(k) = x.col(s[k]);
  return out;
}

Vector select_entries(const Vector& v, const SupportSet& s) {
  Vector out(s.size());
  for (Index k = 0; k < s.size(); ++k) out[k] = v[s[k]];
  return out;
}

Matrix select_rows(const Matrix& x, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

Vector select_rows(const Vector& v, std::span<const Index> rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = v[rows[i]];
  return out;
}

}  // namespace sparsesel
