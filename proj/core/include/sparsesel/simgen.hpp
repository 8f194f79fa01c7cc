#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sparsesel/rng.hpp"
#include "sparsesel/types.hpp"

namespace sparsesel {

/// Population covariance of the simulated design rows.
struct CovarianceSpec {
  enum class Kind { identity, exp_decay, constant, factor };

  Kind kind = Kind::identity;
  Index p = 1;
  double q = 0.0;              // exp_decay: q^{|i-j|}; constant: off-diagonal value
  std::vector<double> spikes;  // factor: diagonal of Lambda_0 (K = spikes.size())

  static CovarianceSpec identity(Index p) { return {Kind::identity, p, 0.0, {}}; }
  static CovarianceSpec exp_decay(Index p, double q) { return {Kind::exp_decay, p, q, {}}; }
  static CovarianceSpec constant(Index p, double q) { return {Kind::constant, p, q, {}}; }
  static CovarianceSpec factor(Index p, std::vector<double> spikes) {
    return {Kind::factor, p, 0.0, std::move(spikes)};
  }
  /// Lambda_0 = diag(2p, p).
  static CovarianceSpec spiky_strong(Index p);
  /// Lambda_0 = diag(2 sqrt(p), sqrt(p)).
  static CovarianceSpec spiky_weak(Index p);

  /// Throws InvalidArgumentError: p >= 1; 0 <= q < 1; factor needs positive spikes, K <= p.
  void validate() const;
};

std::string_view to_string(CovarianceSpec::Kind kind);
CovarianceSpec::Kind parse_covariance_kind(std::string_view name);

/// Sigma for the spec. Only the factor variant consumes `rng` (to draw V with
/// orthonormal columns: Gaussian fill followed by a thin QR).
Matrix gen_covariance(const CovarianceSpec& spec, RngStream& rng);

/// The orthonormal loading matrix V used by gen_covariance for a factor spec.
Matrix gen_factor_loadings(Index p, Index k, RngStream& rng);

enum class SignalKind {
  /// beta*_j = beta_min (1 + Z_j^2), Z_j standard normal.
  chi2,
  /// beta*_j = beta_min.
  fixed,
};

struct SimConfig {
  Index p = 1;
  Index s = 1;
  double sigma = 0.0;
  double beta_min = 0.1;
  std::optional<Index> n_override;
  CovarianceSpec cov;
  std::uint64_t seed = 0;
  SignalKind signal = SignalKind::chi2;

  /// n_override, or ceil(2 s log p).
  Index n() const;
  /// Throws InvalidArgumentError on s > p, sigma < 0, beta_min <= 0, cov.p != p.
  void validate() const;
};

/// ceil(2 s log p).
Index default_sample_size(Index s, Index p);

/// True coefficients on {0, ..., s-1}.
Vector gen_beta(const SimConfig& config, RngStream& rng);

/// Symmetric square root of a PSD matrix. Throws InvalidCovarianceError when
/// sigma is asymmetric or has an eigenvalue below -1e-8 (relative to its scale).
Matrix covariance_root(const Matrix& sigma);

/// n rows x_i = Sigma^{1/2} z_i and y = X beta + sigma * eps.
Dataset sample_dataset(const Matrix& root, Index n, const Vector& beta, double sigma,
                       RngStream& rng);
Dataset sample_dataset(const SimConfig& config, const Vector& beta, RngStream& rng);

/// Append p_n columns drawn from N(0, 0.5 I + 0.5 11'), independent of the
/// existing columns, which are left unchanged.
Dataset augment_noise(const Dataset& data, Index p_n, RngStream& rng);

struct SimulatedReplicate {
  Dataset data;
  Vector beta;
  SupportSet truth;
};

/// Population pieces shared by every replicate of one configuration.
struct SimulationDesign {
  SimConfig config;
  Matrix sigma;
  Matrix root;

  explicit SimulationDesign(SimConfig config);
  /// Replicate r draws from independent sub-streams of split(seed, r).
  SimulatedReplicate replicate(std::uint64_t r) const;
};

}  // namespace sparsesel
