#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsesel/app/commands.hpp"
#include "sparsesel/app/table.hpp"
#include "sparsesel/diagnostics.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/linalg.hpp"
#include "sparsesel/simgen.hpp"

namespace sparsesel::app {

namespace {

struct Problem {
  Dataset data;
  Vector beta;
  SupportSet truth;
  std::vector<std::string> names;
  std::optional<double> sigma;
  std::string sigma_source;
  std::string beta_source;
};

Problem from_input(const ExperimentConfig& config, Scaling scaling) {
  const InputSpec& in = *config.input;
  if (in.truth.empty()) throw InvalidArgumentError("diagnose: input.truth must list the true features");
  const Table table = read_csv(in.path);
  const Regression reg = split_response(table, in.response);
  std::vector<Index> idx;
  for (const auto& name : in.truth) {
    const auto it = std::find(reg.feature_names.begin(), reg.feature_names.end(), name);
    if (it == reg.feature_names.end()) throw InvalidArgumentError("diagnose: truth feature '" + name + "' not found");
    idx.push_back(static_cast<Index>(it - reg.feature_names.begin()));
  }
  Problem out{Dataset(scale_design(reg.x, scaling), reg.y), Vector::Zero(reg.x.cols()),
              SupportSet::from_unordered(idx), reg.feature_names, std::nullopt, "", ""};
  if (out.truth.size() != static_cast<Index>(idx.size())) throw InvalidArgumentError("diagnose: duplicate truth feature");
  const FitResult fit = ols_fit(out.data, out.truth);
  if (!in.beta.empty()) {
    for (std::size_t k = 0; k < idx.size(); ++k) out.beta[idx[k]] = in.beta[k];
    out.beta_source = "config";
  } else {
    out.beta = fit.dense(out.data.p());
    out.beta_source = "ols_on_truth";
  }
  if (out.data.n() > out.truth.size()) {
    out.sigma = std::sqrt(fit.rss / static_cast<double>(out.data.n() - out.truth.size()));
    out.sigma_source = "residual_estimate";
  }
  return out;
}

Problem from_simulation(const ExperimentConfig& config, Scaling scaling) {
  SimConfig sim = *config.sim;
  sim.seed = config.seed;
  const SimulationDesign design(sim);
  SimulatedReplicate rep = design.replicate(0);
  Problem out{rep.data.with_design(scale_design(rep.data.x(), scaling)), rep.beta, rep.truth, {}, sim.sigma,
              "simulation", "simulation"};
  for (Index j = 0; j < sim.p; ++j) out.names.push_back("x" + std::to_string(j + 1));
  return out;
}

template <typename F>
Json guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return Json{{"error", e.what()}};
  }
}

Json names_of(const SupportSet& set, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (Index j : set) out.push_back(names[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace

Json run_diagnose(const ExperimentConfig& config, RunLog& log) {
  config.validate();
  if (!config.input && !config.sim) throw InvalidArgumentError("diagnose: the config needs 'input' or 'sim'");
  const Scaling scaling = config.scaling.value_or(Scaling::none);
  log.add("command: diagnose");
  log.add("seed: " + std::to_string(config.seed));
  const Problem prob = config.input ? from_input(config, scaling) : from_simulation(config, scaling);
  const DiagnoseOptions& opt = config.diagnose;
  const Index s = prob.truth.size();
  const Index s_hat = opt.s_hat > 0 ? opt.s_hat : s;
  const EnumerationOptions enumeration{.budget = config.budget, .allow_sampling = true, .seed = config.seed};
  log.add("problem: n=" + std::to_string(prob.data.n()) + " p=" + std::to_string(prob.data.p()) +
          " s=" + std::to_string(s) + " s_hat=" + std::to_string(s_hat) + " standardize=" + to_string(scaling));

  Json report;
  report["command"] = "diagnose";
  report["seed"] = config.seed;
  report["config"] = to_json(config);
  report["n"] = prob.data.n();
  report["p"] = prob.data.p();
  report["truth"] = names_of(prob.truth, prob.names);
  report["beta_source"] = prob.beta_source;
  double beta_min_actual = std::numeric_limits<double>::infinity();
  for (Index j : prob.truth) beta_min_actual = std::min(beta_min_actual, std::abs(prob.beta[j]));
  report["beta_min_actual"] = json_number(beta_min_actual);

  Json grid = Json::array();
  for (double delta : opt.deltas) {
    grid.push_back(guarded([&] {
      const SeparationReport r = tau_star(prob.data, prob.beta, s_hat, delta, enumeration);
      return Json{{"delta", delta},
                  {"tau_star", json_number(r.tau_star)},
                  {"exact", r.exact},
                  {"subsets_examined", r.subsets_examined},
                  {"family_size", r.family_size},
                  {"achieving_set", names_of(r.achieving_set, prob.names)}};
    }));
  }
  report["tau_star_grid"] = std::move(grid);

  report["tau_star"] = guarded([&] {
    const SeparationReport r = tau_star(prob.data, prob.beta, s, 0.0, enumeration);
    return Json{{"s_hat", s},
                {"value", json_number(r.tau_star)},
                {"exact", r.exact},
                {"achieving_set", names_of(r.achieving_set, prob.names)}};
  });

  std::optional<double> lambda_value;
  report["lambda_m"] = guarded([&] {
    const LambdaMReport r = lambda_m(prob.data, prob.truth, enumeration);
    lambda_value = r.value;
    return Json{{"value", json_number(r.value)},
                {"exact", r.exact},
                {"subsets_examined", r.subsets_examined},
                {"achieving_set", names_of(r.achieving_set, prob.names)}};
  });

  const std::optional<double> sigma = opt.sigma ? opt.sigma : prob.sigma;
  const std::string sigma_source = opt.sigma ? "config" : prob.sigma_source;
  report["beta_min_threshold"] = guarded([&] {
    if (!lambda_value) throw InvalidArgumentError("lambda_m unavailable");
    if (!sigma) throw InvalidArgumentError("noise level unknown: set diagnose.sigma");
    const BetaMinThreshold t =
        beta_min_threshold(*lambda_value, prob.data.n(), prob.data.p(), *sigma, opt.xi, opt.eta);
    return Json{{"value", json_number(t.value)},
                {"recoverable", t.recoverable},
                {"satisfied", t.recoverable && beta_min_actual >= t.value},
                {"sigma", *sigma},
                {"sigma_source", sigma_source},
                {"xi", opt.xi},
                {"eta", opt.eta},
                {"exact", true}};
  });

  report["irrepresentable"] = guarded([&] {
    Vector signs(s);
    for (Index k = 0; k < s; ++k) {
      const double b = prob.beta[prob.truth[k]];
      signs[k] = b > 0 ? 1.0 : (b < 0 ? -1.0 : 0.0);
    }
    const double v = irrepresentable(prob.data, prob.truth, signs);
    return Json{{"value", json_number(v)}, {"holds", v < 1.0}, {"exact", true}};
  });

  report["kappa"] = guarded([&] {
    const Index pi = opt.pi > 0 ? opt.pi : s;
    const Index l = opt.l > 0 ? opt.l : s;
    const KappaReport k = kappa(prob.data, pi, l, s, enumeration);
    return Json{{"value", json_number(k.kappa)},
                {"upper", json_number(k.upper)},
                {"lower", json_number(k.lower)},
                {"upper_size", k.upper_size},
                {"lower_size", k.lower_size},
                {"pi", pi},
                {"l", l},
                {"exact", k.exact},
                {"degenerate", k.degenerate}};
  });

  for (const char* key : {"tau_star", "lambda_m", "beta_min_threshold", "irrepresentable", "kappa"}) {
    const Json& entry = report[key];
    if (entry.contains("error")) {
      log.add(std::string(key) + ": error: " + entry["error"].get<std::string>());
    } else {
      log.add(std::string(key) + ": " + entry["value"].dump());
    }
  }
  write_file(config.out_dir / "diagnose.json", report.dump(2) + "\n");
  log.save(config.out_dir / "run.log");
  return report;
}

}  // namespace sparsesel::app
