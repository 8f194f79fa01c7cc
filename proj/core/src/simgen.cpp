#include "sparsesel/simgen.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "sparsesel/errors.hpp"

namespace sparsesel {

namespace {

// Sub-stream keys.
constexpr std::uint64_t kCovarianceStream = 0xC0FFEEULL;
constexpr std::uint64_t kBetaStream = 1;
constexpr std::uint64_t kDesignStream = 2;

}  // namespace

CovarianceSpec CovarianceSpec::spiky_strong(Index p) {
  const double pd = static_cast<double>(p);
  return factor(p, {2.0 * pd, pd});
}

CovarianceSpec CovarianceSpec::spiky_weak(Index p) {
  const double root = std::sqrt(static_cast<double>(p));
  return factor(p, {2.0 * root, root});
}

void CovarianceSpec::validate() const {
  if (p < 1) throw InvalidArgumentError("CovarianceSpec: p must be positive");
  if ((kind == Kind::exp_decay || kind == Kind::constant) && !(q >= 0.0 && q < 1.0)) {
    throw InvalidArgumentError("CovarianceSpec: q must lie in [0, 1), got " + std::to_string(q));
  }
  if (kind == Kind::factor) {
    if (spikes.empty() || static_cast<Index>(spikes.size()) > p) {
      throw InvalidArgumentError("CovarianceSpec: factor model needs 1 <= K <= p spikes");
    }
    for (double v : spikes) {
      if (!(v > 0.0)) throw InvalidArgumentError("CovarianceSpec: spikes must be positive");
    }
  }
}

std::string_view to_string(CovarianceSpec::Kind kind) {
  switch (kind) {
    case CovarianceSpec::Kind::identity: return "identity";
    case CovarianceSpec::Kind::exp_decay: return "exp_decay";
    case CovarianceSpec::Kind::constant: return "constant";
    case CovarianceSpec::Kind::factor: return "factor";
  }
  return "identity";
}

CovarianceSpec::Kind parse_covariance_kind(std::string_view name) {
  if (name == "identity") return CovarianceSpec::Kind::identity;
  if (name == "exp_decay") return CovarianceSpec::Kind::exp_decay;
  if (name == "constant") return CovarianceSpec::Kind::constant;
  if (name == "factor") return CovarianceSpec::Kind::factor;
  throw InvalidArgumentError("unknown covariance kind '" + std::string(name) + "'");
}

Matrix gen_factor_loadings(Index p, Index k, RngStream& rng) {
  const Matrix g = rng.normal_matrix(p, k);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(p, k);
}

Matrix gen_covariance(const CovarianceSpec& spec, RngStream& rng) {
  spec.validate();
  const Index p = spec.p;
  switch (spec.kind) {
    case CovarianceSpec::Kind::identity:
      return Matrix::Identity(p, p);
    case CovarianceSpec::Kind::exp_decay: {
      Matrix sigma(p, p);
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
          sigma(i, j) = i == j ? 1.0 : std::pow(spec.q, static_cast<double>(std::abs(i - j)));
        }
      }
      return sigma;
    }
    case CovarianceSpec::Kind::constant: {
      Matrix sigma = Matrix::Constant(p, p, spec.q);
      sigma.diagonal().setOnes();
      return sigma;
    }
    case CovarianceSpec::Kind::factor: {
      const auto k = static_cast<Index>(spec.spikes.size());
      const Matrix v = gen_factor_loadings(p, k, rng);
      const Vector lambda = Eigen::Map<const Vector>(spec.spikes.data(), k);
      Matrix sigma = v * lambda.asDiagonal() * v.transpose();
      sigma = 0.5 * (sigma + sigma.transpose());
      sigma.diagonal().array() += 1.0;
      return sigma;
    }
  }
  return Matrix::Identity(p, p);
}

Index default_sample_size(Index s, Index p) {
  return static_cast<Index>(
      std::ceil(2.0 * static_cast<double>(s) * std::log(static_cast<double>(p))));
}

Index SimConfig::n() const { return n_override ? *n_override : default_sample_size(s, p); }

void SimConfig::validate() const {
  cov.validate();
  if (p < 1 || s < 1 || s > p) throw InvalidArgumentError("SimConfig: need 1 <= s <= p");
  if (cov.p != p) throw InvalidArgumentError("SimConfig: covariance dimension differs from p");
  if (!(sigma >= 0.0)) throw InvalidArgumentError("SimConfig: sigma must be nonnegative");
  if (!(beta_min > 0.0)) throw InvalidArgumentError("SimConfig: beta_min must be positive");
  if (n() < 1) throw InvalidArgumentError("SimConfig: sample size must be positive");
}

Vector gen_beta(const SimConfig& config, RngStream& rng) {
  Vector beta = Vector::Zero(config.p);
  for (Index j = 0; j < config.s; ++j) {
    if (config.signal == SignalKind::fixed) {
      beta[j] = config.beta_min;
    } else {
      const double z = rng.normal();
      beta[j] = config.beta_min * (1.0 + z * z);
    }
  }
  return beta;
}

Matrix covariance_root(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols()) throw InvalidCovarianceError("covariance is not square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidCovarianceError("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success) throw InvalidCovarianceError("eigendecomposition failed");
  const double lo = eig.eigenvalues().minCoeff();
  if (lo < -1e-8 * scale) {
    throw InvalidCovarianceError("covariance has negative eigenvalue " + std::to_string(lo));
  }
  const Vector root_vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root_vals.asDiagonal() * eig.eigenvectors().transpose();
}

Dataset sample_dataset(const Matrix& root, Index n, const Vector& beta, double sigma,
                       RngStream& rng) {
  if (beta.size() != root.rows()) throw InvalidArgumentError("sample_dataset: beta length differs from p");
  RngStream design_rng = rng.split(0);
  RngStream noise_rng = rng.split(1);
  Matrix x = design_rng.normal_matrix(n, root.rows()) * root;
  Vector y = x * beta;
  if (sigma > 0.0) y += sigma * noise_rng.normal_vector(n);
  return Dataset(std::move(x), std::move(y));
}

Dataset sample_dataset(const SimConfig& config, const Vector& beta, RngStream& rng) {
  config.validate();
  RngStream cov_rng = RngStream(config.seed).split(kCovarianceStream);
  const Matrix root = covariance_root(gen_covariance(config.cov, cov_rng));
  return sample_dataset(root, config.n(), beta, config.sigma, rng);
}

Dataset augment_noise(const Dataset& data, Index p_n, RngStream& rng) {
  if (p_n < 1) throw InvalidArgumentError("augment_noise: p_n must be positive");
  // Sigma = 0.5 I + 0.5 11' is realized as sqrt(0.5) (z_shared 1' + z_own).
  const Index n = data.n();
  Matrix noise(n, p_n);
  const double half = std::sqrt(0.5);
  for (Index i = 0; i < n; ++i) {
    const double shared = rng.normal();
    for (Index j = 0; j < p_n; ++j) noise(i, j) = half * (shared + rng.normal());
  }
  Matrix x(n, data.p() + p_n);
  x << data.x(), noise;
  return Dataset(std::move(x), data.y());
}

SimulationDesign::SimulationDesign(SimConfig cfg) : config(std::move(cfg)) {
  config.validate();
  RngStream cov_rng = RngStream(config.seed).split(kCovarianceStream);
  sigma = gen_covariance(config.cov, cov_rng);
  root = covariance_root(sigma);
}

SimulatedReplicate SimulationDesign::replicate(std::uint64_t r) const {
  const RngStream rep = RngStream(config.seed).split(r);
  RngStream beta_rng = rep.split(kBetaStream);
  RngStream design_rng = rep.split(kDesignStream);
  Vector beta = gen_beta(config, beta_rng);
  Dataset data = sample_dataset(root, config.n(), beta, config.sigma, design_rng);
  SupportSet truth = SupportSet::range(config.s);
  return {std::move(data), std::move(beta), std::move(truth)};
}

}  // namespace sparsesel
