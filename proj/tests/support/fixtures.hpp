#pragma once

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparsesel/types.hpp"

namespace fixtures {

/// Three observations, four predictors: columns
///   (e1 + eta e3) / sqrt(1 + eta^2), (e1 - eta e3) / sqrt(1 + eta^2),
///   (e1 + e2) / sqrt(2), e2,
/// with y = sqrt(1 + eta^2) (X_0 + X_1) / 2 = e1. Both {0, 1} and {2, 3} fit y exactly.
inline sparsesel::Dataset corner_case(double eta = 0.5) {
  const double c = 1.0 / std::sqrt(1.0 + eta * eta);
  const double r = 1.0 / std::sqrt(2.0);
  sparsesel::Matrix x(3, 4);
  x << c, c, r, 0.0,
       0.0, 0.0, r, 1.0,
       c * eta, -c * eta, 0.0, 0.0;
  const double b = std::sqrt(1.0 + eta * eta) / 2.0;
  sparsesel::Vector y = b * (x.col(0) + x.col(1));
  return sparsesel::Dataset(x, y);
}

inline sparsesel::Vector corner_case_beta(double eta = 0.5) {
  sparsesel::Vector beta = sparsesel::Vector::Zero(4);
  beta[0] = beta[1] = std::sqrt(1.0 + eta * eta) / 2.0;
  return beta;
}

/// n x p Gaussian design with y = X beta + noise * eps; beta supported on the first s columns.
struct Planted {
  sparsesel::Dataset data;
  sparsesel::Vector beta;
};

inline Planted gaussian_instance(Eigen::Index n, Eigen::Index p, Eigen::Index s, double noise,
                                 std::uint64_t seed, double signal = 1.0) {
  std::mt19937_64 gen(seed);
  sparsesel::Matrix x = oracle::gaussian(n, p, gen);
  sparsesel::Vector beta = sparsesel::Vector::Zero(p);
  for (Eigen::Index j = 0; j < s; ++j) beta[j] = signal * ((j % 2 == 0) ? 1.0 : -1.0) * (1.0 + 0.1 * j);
  sparsesel::Vector y = x * beta + noise * oracle::gaussian(n, gen);
  return {sparsesel::Dataset(x, y), beta};
}

/// Columns orthonormal (scaled by sqrt(n) if requested) via QR of a Gaussian matrix.
inline sparsesel::Matrix orthonormal_design(Eigen::Index n, Eigen::Index p, std::uint64_t seed,
                                            double scale = 1.0) {
  std::mt19937_64 gen(seed);
  const sparsesel::Matrix g = oracle::gaussian(n, p, gen);
  Eigen::HouseholderQR<sparsesel::Matrix> qr(g);
  return scale * sparsesel::Matrix(qr.householderQ() * sparsesel::Matrix::Identity(n, p));
}

}  // namespace fixtures
