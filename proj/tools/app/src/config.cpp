#include "sparsesel/app/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sparsesel/comparators.hpp"
#include "sparsesel/errors.hpp"

namespace sparsesel::app {

namespace {

Json yaml_scalar(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted: always a string
  if (text.empty() || text == "~" || text == "null") return nullptr;
  if (text == "true" || text == "True") return true;
  if (text == "false" || text == "False") return false;
  std::int64_t integer = 0;
  auto [iend, iec] = std::from_chars(text.data(), text.data() + text.size(), integer);
  if (iec == std::errc() && iend == text.data() + text.size()) return integer;
  double real = 0.0;
  auto [dend, dec] = std::from_chars(text.data(), text.data() + text.size(), real);
  if (dec == std::errc() && dend == text.data() + text.size()) return real;
  return text;
}

Json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return yaml_scalar(node);
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (const auto& item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return out;
    }
  }
  return nullptr;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidArgumentError("config: " + where + ": " + what);
}

void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected a mapping");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T get(const Json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(where + "." + key, "wrong value type");
  }
}

Index get_index(const Json& obj, const char* key, const std::string& where, Index fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<Index>();
}

double get_real(const Json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

CovarianceSpec covariance_from_json(const Json& doc, Index p) {
  reject_unknown(doc, "sim.covariance", {"kind", "q", "spikes"});
  const auto kind = get<std::string>(doc, "kind", "sim.covariance", "identity");
  if (kind == "spiky_strong" || kind == "spiky-strong") return CovarianceSpec::spiky_strong(p);
  if (kind == "spiky_weak" || kind == "spiky-weak") return CovarianceSpec::spiky_weak(p);
  CovarianceSpec spec;
  spec.kind = parse_covariance_kind(kind);
  spec.p = p;
  spec.q = get_real(doc, "q", "sim.covariance", 0.0);
  spec.spikes = get<std::vector<double>>(doc, "spikes", "sim.covariance", {});
  return spec;
}

Json covariance_to_json(const CovarianceSpec& spec) {
  Json out;
  out["kind"] = std::string(to_string(spec.kind));
  if (spec.kind == CovarianceSpec::Kind::exp_decay || spec.kind == CovarianceSpec::Kind::constant) {
    out["q"] = spec.q;
  }
  if (spec.kind == CovarianceSpec::Kind::factor) out["spikes"] = spec.spikes;
  return out;
}

MethodSpec method_from_json(const Json& doc, std::size_t position) {
  const std::string where = "methods[" + std::to_string(position) + "]";
  Json obj = doc;
  if (doc.is_string()) obj = Json{{"name", doc}};
  reject_unknown(obj, where, {"name", "label", "pi", "l", "max_size", "a", "lambdas", "lambda_ratio"});
  MethodSpec m;
  m.kind = parse_method_kind(get<std::string>(obj, "name", where, ""));
  m.label = get<std::string>(obj, "label", where, to_string(m.kind));
  m.pi = get_index(obj, "pi", where, 0);
  m.l = get_index(obj, "l", where, 0);
  m.max_size = get_index(obj, "max_size", where, 0);
  m.a = get_real(obj, "a", where, 3.7);
  m.lambda_count = get_index(obj, "lambdas", where, 100);
  m.lambda_ratio = get_real(obj, "lambda_ratio", where, 1e-3);
  return m;
}

Json method_to_json(const MethodSpec& m) {
  Json out;
  out["name"] = to_string(m.kind);
  out["label"] = m.label;
  if (m.kind == MethodSpec::Kind::iht || m.kind == MethodSpec::Kind::two_stage) {
    out["pi"] = m.pi;
    out["l"] = m.l;
  }
  out["max_size"] = m.max_size;
  if (m.kind == MethodSpec::Kind::scad) out["a"] = m.a;
  if (m.penalized()) {
    out["lambdas"] = m.lambda_count;
    out["lambda_ratio"] = m.lambda_ratio;
  }
  return out;
}

}  // namespace

std::string to_string(MethodSpec::Kind kind) {
  switch (kind) {
    case MethodSpec::Kind::iht: return "iht";
    case MethodSpec::Kind::two_stage: return "two_stage";
    case MethodSpec::Kind::bss: return "bss";
    case MethodSpec::Kind::sis: return "sis";
    case MethodSpec::Kind::lasso: return "lasso";
    case MethodSpec::Kind::scad: return "scad";
  }
  return "unknown";
}

MethodSpec::Kind parse_method_kind(const std::string& name) {
  for (auto kind : {MethodSpec::Kind::iht, MethodSpec::Kind::two_stage, MethodSpec::Kind::bss,
                    MethodSpec::Kind::sis, MethodSpec::Kind::lasso, MethodSpec::Kind::scad}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgumentError("unknown method '" + name + "'");
}

std::string to_string(Scaling scaling) {
  switch (scaling) {
    case Scaling::zscore: return "zscore";
    case Scaling::unitnorm: return "unitnorm";
    case Scaling::none: return "none";
  }
  return "none";
}

Scaling parse_scaling(const std::string& name) {
  if (name == "zscore") return Scaling::zscore;
  if (name == "unitnorm") return Scaling::unitnorm;
  if (name == "none") return Scaling::none;
  throw InvalidArgumentError("unknown standardization '" + name + "' (expected zscore, unitnorm or none)");
}

SimConfig sim_config_from_json(const Json& doc) {
  reject_unknown(doc, "sim", {"p", "s", "n", "sigma", "beta_min", "signal", "covariance"});
  SimConfig c;
  c.p = get_index(doc, "p", "sim", 0);
  c.s = get_index(doc, "s", "sim", 0);
  if (doc.contains("n") && !doc.at("n").is_null()) c.n_override = get_index(doc, "n", "sim", 0);
  c.sigma = get_real(doc, "sigma", "sim", 0.0);
  c.beta_min = get_real(doc, "beta_min", "sim", 0.1);
  const auto signal = get<std::string>(doc, "signal", "sim", "chi2");
  if (signal == "chi2") {
    c.signal = SignalKind::chi2;
  } else if (signal == "fixed") {
    c.signal = SignalKind::fixed;
  } else {
    fail("sim.signal", "expected chi2 or fixed");
  }
  c.cov = doc.contains("covariance") ? covariance_from_json(doc.at("covariance"), c.p)
                                     : CovarianceSpec::identity(c.p);
  return c;
}

Json to_json(const SimConfig& c) {
  Json out;
  out["p"] = c.p;
  out["s"] = c.s;
  out["n"] = c.n();
  out["sigma"] = c.sigma;
  out["beta_min"] = c.beta_min;
  out["signal"] = c.signal == SignalKind::chi2 ? "chi2" : "fixed";
  out["covariance"] = covariance_to_json(c.cov);
  return out;
}

ExperimentConfig parse_config(const Json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc, "root",
                 {"sim", "input", "methods", "replicates", "cv_folds", "seed", "out", "threads", "budget",
                  "standardize", "fit", "diagnose"});
  ExperimentConfig c;
  if (doc.contains("sim")) c.sim = sim_config_from_json(doc.at("sim"));
  if (doc.contains("input")) {
    const Json& in = doc.at("input");
    reject_unknown(in, "input", {"path", "response", "truth", "beta"});
    InputSpec spec;
    spec.path = get<std::string>(in, "path", "input", "");
    if (spec.path.is_relative() && !base_dir.empty()) spec.path = base_dir / spec.path;
    spec.response = get<std::string>(in, "response", "input", "y");
    spec.truth = get<std::vector<std::string>>(in, "truth", "input", {});
    spec.beta = get<std::vector<double>>(in, "beta", "input", {});
    c.input = std::move(spec);
  }
  if (doc.contains("methods")) {
    const Json& methods = doc.at("methods");
    if (!methods.is_array()) fail("methods", "expected a list");
    for (std::size_t k = 0; k < methods.size(); ++k) c.methods.push_back(method_from_json(methods[k], k));
  }
  c.replicates = get_index(doc, "replicates", "root", 1);
  c.cv_folds = get_index(doc, "cv_folds", "root", 5);
  c.seed = get<std::uint64_t>(doc, "seed", "root", 0);
  c.out_dir = get<std::string>(doc, "out", "root", "out");
  c.threads = get<int>(doc, "threads", "root", 0);
  c.budget = get<std::uint64_t>(doc, "budget", "root", kDefaultSubsetBudget);
  if (doc.contains("standardize")) c.scaling = parse_scaling(doc.at("standardize").get<std::string>());
  if (doc.contains("fit")) {
    const Json& f = doc.at("fit");
    reject_unknown(f, "fit", {"test_fraction", "refit_top_k", "augment_noise"});
    c.fit.test_fraction = get_real(f, "test_fraction", "fit", 0.2);
    c.fit.refit_top_k = get_index(f, "refit_top_k", "fit", 10);
    c.fit.augment_noise = get_index(f, "augment_noise", "fit", 0);
  }
  if (doc.contains("diagnose")) {
    const Json& d = doc.at("diagnose");
    reject_unknown(d, "diagnose", {"deltas", "s_hat", "pi", "l", "sigma", "xi", "eta"});
    c.diagnose.deltas = get<std::vector<double>>(d, "deltas", "diagnose", c.diagnose.deltas);
    c.diagnose.s_hat = get_index(d, "s_hat", "diagnose", 0);
    c.diagnose.pi = get_index(d, "pi", "diagnose", 0);
    c.diagnose.l = get_index(d, "l", "diagnose", 0);
    if (d.contains("sigma") && !d.at("sigma").is_null()) c.diagnose.sigma = get_real(d, "sigma", "diagnose", 0.0);
    c.diagnose.xi = get_real(d, "xi", "diagnose", 2.0);
    c.diagnose.eta = get_real(d, "eta", "diagnose", 0.5);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json doc;
  try {
    if (path.extension() == ".json") {
      doc = Json::parse(buffer.str());
    } else {
      doc = yaml_to_json(YAML::Load(buffer.str()));
    }
  } catch (const std::exception& e) {
    throw InvalidArgumentError("config: cannot parse " + path.string() + ": " + e.what());
  }
  if (doc.is_null()) doc = Json::object();
  return parse_config(doc, path.parent_path());
}

void ExperimentConfig::validate() const {
  if (replicates < 1) fail("replicates", "must be at least 1");
  if (cv_folds < 2) fail("cv_folds", "must be at least 2");
  if (budget < 1) fail("budget", "must be positive");
  if (sim) sim->validate();
  if (input && input->path.empty()) fail("input.path", "missing");
  if (input && !input->beta.empty() && input->beta.size() != input->truth.size()) {
    fail("input.beta", "length must match input.truth");
  }
  for (std::size_t k = 0; k < methods.size(); ++k) {
    const MethodSpec& m = methods[k];
    const std::string where = "methods[" + std::to_string(k) + "]";
    if ((m.kind == MethodSpec::Kind::iht || m.kind == MethodSpec::Kind::two_stage) && (m.pi < 1 || m.l < 1)) {
      fail(where, "iht and two_stage need positive pi and l");
    }
    if (m.max_size < 0) fail(where, "max_size must be non-negative");
    if (m.penalized() && (m.lambda_count < 2 || !(m.lambda_ratio > 0.0 && m.lambda_ratio < 1.0))) {
      fail(where, "need lambdas >= 2 and 0 < lambda_ratio < 1");
    }
    if (m.kind == MethodSpec::Kind::scad) PenaltySpec::scad(m.a).validate();
    for (std::size_t j = 0; j < k; ++j) {
      if (methods[j].label == m.label) fail(where, "duplicate label '" + m.label + "'");
    }
  }
  if (!(fit.test_fraction > 0.0 && fit.test_fraction < 1.0)) fail("fit.test_fraction", "must be in (0, 1)");
  if (fit.refit_top_k < 0 || fit.augment_noise < 0) fail("fit", "counts must be non-negative");
  for (double d : diagnose.deltas) {
    if (!(d >= 0.0 && d <= 1.0)) fail("diagnose.deltas", "values must lie in [0, 1]");
  }
}

Json to_json(const ExperimentConfig& c) {
  Json out;
  if (c.sim) out["sim"] = to_json(*c.sim);
  if (c.input) {
    out["input"]["path"] = c.input->path.generic_string();
    out["input"]["response"] = c.input->response;
    out["input"]["truth"] = c.input->truth;
    if (!c.input->beta.empty()) out["input"]["beta"] = c.input->beta;
  }
  out["methods"] = Json::array();
  for (const auto& m : c.methods) out["methods"].push_back(method_to_json(m));
  out["replicates"] = c.replicates;
  out["cv_folds"] = c.cv_folds;
  out["seed"] = c.seed;
  out["budget"] = c.budget;
  out["standardize"] = c.scaling ? to_string(*c.scaling) : "default";
  out["fit"] = {{"test_fraction", c.fit.test_fraction},
                {"refit_top_k", c.fit.refit_top_k},
                {"augment_noise", c.fit.augment_noise}};
  out["diagnose"] = {{"deltas", c.diagnose.deltas}, {"s_hat", c.diagnose.s_hat}, {"pi", c.diagnose.pi},
                     {"l", c.diagnose.l},           {"xi", c.diagnose.xi},       {"eta", c.diagnose.eta}};
  if (c.diagnose.sigma) out["diagnose"]["sigma"] = *c.diagnose.sigma;
  return out;
}

}  // namespace sparsesel::app
