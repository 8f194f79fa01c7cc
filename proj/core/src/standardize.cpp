#include "sparsesel/standardize.hpp"

#include <cmath>
#include <string>

#include "sparsesel/errors.hpp"

namespace sparsesel {

StandardizeMode parse_standardize_mode(std::string_view name) {
  if (name == "zscore") return StandardizeMode::zscore;
  if (name == "unitnorm") return StandardizeMode::unitnorm;
  throw InvalidArgumentError("unknown standardization mode '" + std::string(name) +
                             "' (expected zscore or unitnorm)");
}

std::string_view to_string(StandardizeMode mode) {
  return mode == StandardizeMode::zscore ? "zscore" : "unitnorm";
}

ColumnScaling ColumnScaling::fit(const Matrix& x, StandardizeMode mode) {
  const Index n = x.rows();
  if (mode == StandardizeMode::zscore && n < 2) {
    throw DegenerateColumnError(0, "standardize_columns: z-scoring needs at least two rows");
  }
  ColumnScaling out;
  out.center = x.colwise().mean().transpose();
  out.scale.resize(x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    const double norm = (x.col(j).array() - out.center[j]).matrix().norm();
    const double magnitude = x.col(j).cwiseAbs().maxCoeff();
    // Centering round-off on a constant column is O(eps * |x|).
    if (!(norm > 1e-12 * std::max(1.0, magnitude) * std::sqrt(static_cast<double>(n)))) {
      throw DegenerateColumnError(j, "standardize_columns: column " + std::to_string(j) +
                                         " is constant");
    }
    out.scale[j] =
        mode == StandardizeMode::zscore ? norm / std::sqrt(static_cast<double>(n - 1)) : norm;
  }
  return out;
}

Matrix ColumnScaling::apply(const Matrix& x) const {
  if (x.cols() != center.size()) {
    throw InvalidArgumentError("ColumnScaling::apply: column count mismatch");
  }
  Matrix out = x.rowwise() - center.transpose();
  out.array().rowwise() /= scale.transpose().array();
  return out;
}

Matrix standardize_columns(const Matrix& x, StandardizeMode mode) {
  return ColumnScaling::fit(x, mode).apply(x);
}

}  // namespace sparsesel
