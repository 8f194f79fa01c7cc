#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsesel/bss.hpp"
#include "sparsesel/simgen.hpp"
#include "sparsesel/standardize.hpp"

namespace sparsesel::app {

using Json = nlohmann::ordered_json;

/// One selection method of an experiment.
struct MethodSpec {
  enum class Kind { iht, two_stage, bss, sis, lasso, scad };

  Kind kind = Kind::iht;
  std::string label;         // file-name label; defaults to the kind name
  Index pi = 0;              // iht / two_stage projection size (required)
  Index l = 0;               // iht / two_stage expansion size (required)
  Index max_size = 0;        // upper end of a model-size sweep; 0 = method default
  double a = 3.7;            // scad shape
  Index lambda_count = 100;  // penalized grid length
  double lambda_ratio = 1e-3;

  bool penalized() const noexcept { return kind == Kind::lasso || kind == Kind::scad; }
};

std::string to_string(MethodSpec::Kind kind);
MethodSpec::Kind parse_method_kind(const std::string& name);

/// A CSV input: the response column and (for diagnose) the true support.
struct InputSpec {
  std::filesystem::path path;
  std::string response;
  std::vector<std::string> truth;  // feature names in the true support
  std::vector<double> beta;        // optional true coefficients, aligned with `truth`
};

struct FitOptions {
  double test_fraction = 0.2;
  Index refit_top_k = 10;
  Index augment_noise = 0;  // p_n correlated noise columns appended before splitting
};

struct DiagnoseOptions {
  std::vector<double> deltas{0.0, 0.25, 0.5, 0.75, 1.0};
  Index s_hat = 0;  // 0 = true sparsity
  Index pi = 0;     // kappa block sizes; 0 = s
  Index l = 0;      // 0 = s
  std::optional<double> sigma;
  double xi = 2.0;
  double eta = 0.5;
};

/// Scaling applied to the design before any method runs. `none` leaves columns as given.
enum class Scaling { zscore, unitnorm, none };

std::string to_string(Scaling scaling);
Scaling parse_scaling(const std::string& name);

struct ExperimentConfig {
  std::optional<SimConfig> sim;
  std::optional<InputSpec> input;
  std::vector<MethodSpec> methods;
  Index replicates = 1;
  Index cv_folds = 5;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  int threads = 0;  // 0 = runtime default
  std::uint64_t budget = kDefaultSubsetBudget;
  std::optional<Scaling> scaling;  // unset = command default
  FitOptions fit;
  DiagnoseOptions diagnose;

  /// Throws InvalidArgumentError on an inconsistent configuration.
  void validate() const;
};

/// Parses a YAML or JSON (by extension) config file. Relative input paths are
/// resolved against the file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// The fully resolved configuration, as embedded in every output.
Json to_json(const ExperimentConfig& config);
Json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const Json& doc);

}  // namespace sparsesel::app
